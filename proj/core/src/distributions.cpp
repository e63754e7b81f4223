#include "inar/distributions.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace inar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPoissonInversionCutover = 10.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": probability must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

// log(1 - p + p e^t) without overflow for large |t|.
double bernoulli_log_mgf(double p, double t) {
  if (p == 0.0) return 0.0;
  if (p == 1.0) return t;
  if (t <= 0.0) return std::log1p(p * std::expm1(t));
  return t + std::log1p((1.0 - p) * std::expm1(-t));
}

double bernoulli_tilted_mean(double p, double t) {
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  if (t <= 0.0) {
    const double w = p * std::exp(t);
    return w / (1.0 - p + w);
  }
  return p / (p + (1.0 - p) * std::exp(-t));
}

double log_binomial_pmf(std::int64_t n, std::int64_t k, double p) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

}  // namespace

CountDistribution CountDistribution::constant(std::int64_t value) {
  if (value < 0) throw std::invalid_argument("constant: value must be nonnegative");
  return CountDistribution(dist::Constant{value});
}

CountDistribution CountDistribution::bernoulli(double p) {
  check_probability(p, "bernoulli");
  return CountDistribution(dist::Bernoulli{p});
}

CountDistribution CountDistribution::binomial(std::int64_t trials, double p) {
  if (trials < 1) throw std::invalid_argument("binomial: trials must be positive");
  check_probability(p, "binomial");
  return CountDistribution(dist::Binomial{trials, p});
}

CountDistribution CountDistribution::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("poisson: lambda must be a finite nonnegative number");
  }
  return CountDistribution(dist::Poisson{lambda});
}

CountDistribution CountDistribution::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric: p must lie in (0, 1]");
  return CountDistribution(dist::Geometric{p});
}

CountDistribution CountDistribution::finite_support(std::vector<double> probs) {
  if (probs.empty()) throw std::invalid_argument("finite_support: empty probability vector");
  for (double q : probs) check_probability(q, "finite_support");
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("finite_support: probabilities must sum to 1 within 1e-12");
  }
  for (double& q : probs) q /= total;
  while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();
  return CountDistribution(dist::FiniteSupport{std::move(probs)});
}

std::string CountDistribution::name() const {
  return std::visit(Overloaded{
                        [](const dist::Constant& d) { return "Constant(" + std::to_string(d.value) + ")"; },
                        [](const dist::Bernoulli& d) { return "Bernoulli(" + std::to_string(d.p) + ")"; },
                        [](const dist::Binomial& d) {
                          return "Binomial(" + std::to_string(d.trials) + ", " + std::to_string(d.p) + ")";
                        },
                        [](const dist::Poisson& d) { return "Poisson(" + std::to_string(d.lambda) + ")"; },
                        [](const dist::Geometric& d) { return "Geometric(" + std::to_string(d.p) + ")"; },
                        [](const dist::FiniteSupport& d) {
                          return "FiniteSupport(" + std::to_string(d.probs.size()) + " atoms)";
                        },
                    },
                    params_);
}

double CountDistribution::mean() const {
  return std::visit(Overloaded{
                        [](const dist::Constant& d) { return static_cast<double>(d.value); },
                        [](const dist::Bernoulli& d) { return d.p; },
                        [](const dist::Binomial& d) { return static_cast<double>(d.trials) * d.p; },
                        [](const dist::Poisson& d) { return d.lambda; },
                        [](const dist::Geometric& d) { return (1.0 - d.p) / d.p; },
                        [](const dist::FiniteSupport& d) {
                          double m = 0.0;
                          for (std::size_t k = 0; k < d.probs.size(); ++k) m += static_cast<double>(k) * d.probs[k];
                          return m;
                        },
                    },
                    params_);
}

double CountDistribution::variance() const {
  return std::visit(Overloaded{
                        [](const dist::Constant&) { return 0.0; },
                        [](const dist::Bernoulli& d) { return d.p * (1.0 - d.p); },
                        [](const dist::Binomial& d) { return static_cast<double>(d.trials) * d.p * (1.0 - d.p); },
                        [](const dist::Poisson& d) { return d.lambda; },
                        [](const dist::Geometric& d) { return (1.0 - d.p) / (d.p * d.p); },
                        [this](const dist::FiniteSupport& d) {
                          const double m = mean();
                          double v = 0.0;
                          for (std::size_t k = 0; k < d.probs.size(); ++k) {
                            const double dk = static_cast<double>(k) - m;
                            v += dk * dk * d.probs[k];
                          }
                          return v;
                        },
                    },
                    params_);
}

double CountDistribution::log_mgf(double t) const {
  if (t == 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [t](const dist::Constant& d) { return d.value == 0 ? 0.0 : static_cast<double>(d.value) * t; },
          [t](const dist::Bernoulli& d) { return bernoulli_log_mgf(d.p, t); },
          [t](const dist::Binomial& d) { return static_cast<double>(d.trials) * bernoulli_log_mgf(d.p, t); },
          [t](const dist::Poisson& d) { return d.lambda == 0.0 ? 0.0 : d.lambda * std::expm1(t); },
          [t](const dist::Geometric& d) {
            if (d.p == 1.0) return 0.0;
            const double q = (1.0 - d.p) * std::expm1(t) / d.p;
            if (!(q < 1.0)) return kInf;
            return -std::log1p(-q);
          },
          [t](const dist::FiniteSupport& d) {
            const std::size_t kmax = d.probs.size() - 1;
            std::size_t kmin = 0;
            while (d.probs[kmin] == 0.0) ++kmin;
            const double shift = t > 0.0 ? t * static_cast<double>(kmax) : t * static_cast<double>(kmin);
            double s = 0.0;
            for (std::size_t k = kmin; k <= kmax; ++k) {
              if (d.probs[k] > 0.0) s += d.probs[k] * std::exp(t * static_cast<double>(k) - shift);
            }
            return shift + std::log(s);
          },
      },
      params_);
}

double CountDistribution::tilted_mean(double t) const {
  return std::visit(
      Overloaded{
          [](const dist::Constant& d) { return static_cast<double>(d.value); },
          [t](const dist::Bernoulli& d) { return bernoulli_tilted_mean(d.p, t); },
          [t](const dist::Binomial& d) { return static_cast<double>(d.trials) * bernoulli_tilted_mean(d.p, t); },
          [t](const dist::Poisson& d) { return d.lambda * std::exp(t); },
          [t](const dist::Geometric& d) {
            if (d.p == 1.0) return 0.0;
            const double w = (1.0 - d.p) * std::exp(t);
            if (!(w < 1.0)) return kInf;
            return w / (1.0 - w);
          },
          [t](const dist::FiniteSupport& d) {
            const std::size_t kmax = d.probs.size() - 1;
            std::size_t kmin = 0;
            while (d.probs[kmin] == 0.0) ++kmin;
            const double shift = t > 0.0 ? t * static_cast<double>(kmax) : t * static_cast<double>(kmin);
            double s = 0.0;
            double sk = 0.0;
            for (std::size_t k = kmin; k <= kmax; ++k) {
              if (d.probs[k] == 0.0) continue;
              const double w = d.probs[k] * std::exp(t * static_cast<double>(k) - shift);
              s += w;
              sk += static_cast<double>(k) * w;
            }
            return sk / s;
          },
      },
      params_);
}

double CountDistribution::log_mgf_domain_sup() const {
  if (const auto* g = std::get_if<dist::Geometric>(&params_)) {
    return g->p == 1.0 ? kInf : -std::log1p(-g->p);
  }
  return kInf;
}

double CountDistribution::pmf(std::int64_t k) const {
  if (k < 0) return 0.0;
  return std::visit(
      Overloaded{
          [k](const dist::Constant& d) { return k == d.value ? 1.0 : 0.0; },
          [k](const dist::Bernoulli& d) { return k == 0 ? 1.0 - d.p : (k == 1 ? d.p : 0.0); },
          [k](const dist::Binomial& d) {
            if (k > d.trials) return 0.0;
            if (d.p == 0.0) return k == 0 ? 1.0 : 0.0;
            if (d.p == 1.0) return k == d.trials ? 1.0 : 0.0;
            return std::exp(log_binomial_pmf(d.trials, k, d.p));
          },
          [k](const dist::Poisson& d) {
            if (d.lambda == 0.0) return k == 0 ? 1.0 : 0.0;
            const double dk = static_cast<double>(k);
            return std::exp(-d.lambda + dk * std::log(d.lambda) - std::lgamma(dk + 1.0));
          },
          [k](const dist::Geometric& d) {
            if (d.p == 1.0) return k == 0 ? 1.0 : 0.0;
            return d.p * std::exp(static_cast<double>(k) * std::log1p(-d.p));
          },
          [k](const dist::FiniteSupport& d) {
            return static_cast<std::size_t>(k) < d.probs.size() ? d.probs[static_cast<std::size_t>(k)] : 0.0;
          },
      },
      params_);
}

std::optional<std::int64_t> CountDistribution::max_support() const {
  return std::visit(
      Overloaded{
          [](const dist::Constant& d) -> std::optional<std::int64_t> { return d.value; },
          [](const dist::Bernoulli& d) -> std::optional<std::int64_t> { return d.p > 0.0 ? 1 : 0; },
          [](const dist::Binomial& d) -> std::optional<std::int64_t> { return d.p > 0.0 ? d.trials : 0; },
          [](const dist::Poisson& d) -> std::optional<std::int64_t> {
            if (d.lambda == 0.0) return 0;
            return std::nullopt;
          },
          [](const dist::Geometric& d) -> std::optional<std::int64_t> {
            if (d.p == 1.0) return 0;
            return std::nullopt;
          },
          [](const dist::FiniteSupport& d) -> std::optional<std::int64_t> {
            return static_cast<std::int64_t>(d.probs.size()) - 1;
          },
      },
      params_);
}

bool CountDistribution::is_degenerate() const { return variance() == 0.0; }

std::int64_t CountDistribution::sample(RandomStream& rng) const {
  return std::visit(
      Overloaded{
          [](const dist::Constant& d) { return d.value; },
          [&rng](const dist::Bernoulli& d) -> std::int64_t { return rng.uniform() < d.p ? 1 : 0; },
          // O(trials); fine for the small trial counts used as offspring laws.
          [&rng](const dist::Binomial& d) {
            std::int64_t k = 0;
            for (std::int64_t i = 0; i < d.trials; ++i) k += rng.uniform() < d.p ? 1 : 0;
            return k;
          },
          [&rng](const dist::Poisson& d) { return sample_poisson(d.lambda, rng); },
          [&rng](const dist::Geometric& d) -> std::int64_t {
            if (d.p == 1.0) return 0;
            return static_cast<std::int64_t>(std::floor(std::log(rng.uniform()) / std::log1p(-d.p)));
          },
          [&rng](const dist::FiniteSupport& d) {
            const double u = rng.uniform();
            double cum = 0.0;
            for (std::size_t k = 0; k < d.probs.size(); ++k) {
              cum += d.probs[k];
              if (u < cum) return static_cast<std::int64_t>(k);
            }
            return static_cast<std::int64_t>(d.probs.size()) - 1;
          },
      },
      params_);
}

std::int64_t sample_poisson(double lambda, RandomStream& rng) {
  if (lambda <= 0.0) return 0;
  if (lambda <= kPoissonInversionCutover) {
    const double p0 = std::exp(-lambda);
    for (;;) {
      const double u = rng.uniform();
      double p = p0;
      double cdf = p0;
      std::int64_t k = 0;
      while (u > cdf) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
        if (p == 0.0) break;  // cdf saturated below u through rounding; redraw
      }
      if (u <= cdf) return k;
    }
  }
  // Hoermann (1993), "The transformed rejection method for generating Poisson
  // random variables", algorithm PTRS.
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

}  // namespace inar
