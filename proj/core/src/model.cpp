#include "inar/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "inar/errors.hpp"

namespace inar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kMaxHorizon = std::int64_t{1} << 62;
constexpr std::int64_t kEulerMaclaurinStart = 2000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double decay_coefficient(const DecayLaw& law, std::int64_t k) {
  return std::visit(Overloaded{
                        [k](const decay::Geometric& g) {
                          return g.c * std::pow(g.r, static_cast<double>(k - 1));
                        },
                        [k](const decay::PowerLaw& p) {
                          return p.c * std::pow(static_cast<double>(k), -p.a);
                        },
                        [k](const decay::FiniteList& f) {
                          return static_cast<std::size_t>(k) <= f.values.size()
                                     ? f.values[static_cast<std::size_t>(k - 1)]
                                     : 0.0;
                        },
                    },
                    law);
}

std::optional<double> decay_sum(const DecayLaw& law) {
  return std::visit(Overloaded{
                        [](const decay::Geometric& g) -> std::optional<double> { return g.c / (1.0 - g.r); },
                        [](const decay::PowerLaw& p) -> std::optional<double> {
                          if (p.c == 0.0) return 0.0;
                          if (p.a <= 1.0) return std::nullopt;
                          return p.c * power_tail_sum(p.a, 1);
                        },
                        [](const decay::FiniteList& f) -> std::optional<double> {
                          double s = 0.0;
                          for (auto it = f.values.rbegin(); it != f.values.rend(); ++it) s += *it;
                          return s;
                        },
                    },
                    law);
}

// sup_{n >= 1} n^e * alpha_n over the decay law, +inf when unbounded.
double weighted_sup(const DecayLaw& law, double e) {
  return std::visit(Overloaded{
                        [e](const decay::Geometric& g) {
                          if (g.c == 0.0) return 0.0;
                          const double peak = e / -std::log(g.r) + 2.0;
                          double best = 0.0;
                          for (std::int64_t n = 1; static_cast<double>(n) <= peak; ++n) {
                            best = std::max(best, std::pow(static_cast<double>(n), e) * g.c *
                                                      std::pow(g.r, static_cast<double>(n - 1)));
                          }
                          return best;
                        },
                        [e](const decay::PowerLaw& p) {
                          if (p.c == 0.0) return 0.0;
                          return e <= p.a ? p.c : kInf;
                        },
                        [e](const decay::FiniteList& f) {
                          double best = 0.0;
                          for (std::size_t i = 0; i < f.values.size(); ++i) {
                            best = std::max(best, std::pow(static_cast<double>(i + 1), e) * f.values[i]);
                          }
                          return best;
                        },
                    },
                    law);
}

double explicit_weighted_sup(const offspring::Explicit& ex, double e) {
  double best = 0.0;
  for (std::size_t i = 0; i < ex.laws.size(); ++i) {
    best = std::max(best, std::pow(static_cast<double>(i + 1), e) * ex.laws[i].mean());
  }
  return best;
}

void check_decay(const DecayLaw& law) {
  std::visit(Overloaded{
                 [](const decay::Geometric& g) {
                   if (!(g.c >= 0.0) || !std::isfinite(g.c)) throw std::invalid_argument("geometric decay: c must be >= 0");
                   if (!(g.r > 0.0 && g.r < 1.0)) throw std::invalid_argument("geometric decay: r must lie in (0, 1)");
                 },
                 [](const decay::PowerLaw& p) {
                   if (!(p.c >= 0.0) || !std::isfinite(p.c)) throw std::invalid_argument("power-law decay: c must be >= 0");
                   if (!(p.a > 0.0) || !std::isfinite(p.a)) throw std::invalid_argument("power-law decay: a must be > 0");
                 },
                 [](const decay::FiniteList& f) {
                   for (double v : f.values) {
                     if (!(v >= 0.0) || !std::isfinite(v)) {
                       throw std::invalid_argument("finite-list decay: coefficients must be finite and >= 0");
                     }
                   }
                 },
             },
             law);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

double power_tail_sum(double a, std::int64_t first) {
  if (!(a > 1.0)) return kInf;
  first = std::max<std::int64_t>(first, 1);
  const std::int64_t n0 = std::max(first, kEulerMaclaurinStart);
  const double n = static_cast<double>(n0);
  double tail = std::pow(n, 1.0 - a) / (a - 1.0) + 0.5 * std::pow(n, -a) +
                a * std::pow(n, -a - 1.0) / 12.0 -
                a * (a + 1.0) * (a + 2.0) * std::pow(n, -a - 3.0) / 720.0;
  for (std::int64_t k = n0 - 1; k >= first; --k) tail += std::pow(static_cast<double>(k), -a);
  return tail;
}

InarModel::InarModel(CountDistribution immigration, OffspringSequence offspring)
    : immigration_(std::move(immigration)), offspring_(std::move(offspring)) {
  if (const auto* pf = std::get_if<offspring::PoissonFamily>(&offspring_)) {
    check_decay(pf->decay);
    mean_l1_ = decay_sum(pf->decay);
    var_l1_ = mean_l1_;
  } else {
    const auto& ex = std::get<offspring::Explicit>(offspring_);
    double m = 0.0;
    double v = 0.0;
    for (auto it = ex.laws.rbegin(); it != ex.laws.rend(); ++it) {
      m += it->mean();
      v += it->variance();
    }
    mean_l1_ = m;
    var_l1_ = v;
  }
  horizon_ = effective_horizon(*this, kTruncationTol);
}

bool InarModel::is_poisson_family() const noexcept {
  return std::holds_alternative<offspring::PoissonFamily>(offspring_);
}

double InarModel::offspring_mean(std::int64_t k) const {
  if (k < 1) return 0.0;
  if (const auto* pf = std::get_if<offspring::PoissonFamily>(&offspring_)) {
    return decay_coefficient(pf->decay, k);
  }
  const auto& laws = std::get<offspring::Explicit>(offspring_).laws;
  return static_cast<std::size_t>(k) <= laws.size() ? laws[static_cast<std::size_t>(k - 1)].mean() : 0.0;
}

double InarModel::offspring_variance(std::int64_t k) const {
  if (k < 1) return 0.0;
  if (is_poisson_family()) return offspring_mean(k);
  const auto& laws = std::get<offspring::Explicit>(offspring_).laws;
  return static_cast<std::size_t>(k) <= laws.size() ? laws[static_cast<std::size_t>(k - 1)].variance() : 0.0;
}

CountDistribution InarModel::offspring_law(std::int64_t k) const {
  if (is_poisson_family()) return CountDistribution::poisson(offspring_mean(k));
  const auto& laws = std::get<offspring::Explicit>(offspring_).laws;
  if (k >= 1 && static_cast<std::size_t>(k) <= laws.size()) return laws[static_cast<std::size_t>(k - 1)];
  return CountDistribution::constant(0);
}

double InarModel::offspring_log_mgf(std::int64_t k, double x) const {
  if (is_poisson_family()) {
    const double a = offspring_mean(k);
    return a == 0.0 ? 0.0 : a * std::expm1(x);
  }
  const auto& laws = std::get<offspring::Explicit>(offspring_).laws;
  if (k >= 1 && static_cast<std::size_t>(k) <= laws.size()) return laws[static_cast<std::size_t>(k - 1)].log_mgf(x);
  return 0.0;
}

double InarModel::offspring_log_mgf_sum(double x) const {
  if (is_poisson_family()) {
    const double norm = offspring_mean_l1(*this);
    return norm == 0.0 ? 0.0 : norm * std::expm1(x);
  }
  double s = 0.0;
  for (const auto& law : std::get<offspring::Explicit>(offspring_).laws) {
    const double v = law.log_mgf(x);
    if (v == kInf) return kInf;
    s += v;
  }
  return s;
}

double InarModel::offspring_tilted_mean_sum(double x) const {
  if (is_poisson_family()) return offspring_mean_l1(*this) * std::exp(x);
  double s = 0.0;
  for (const auto& law : std::get<offspring::Explicit>(offspring_).laws) s += law.tilted_mean(x);
  return s;
}

std::optional<std::int64_t> InarModel::finite_length() const {
  if (const auto* pf = std::get_if<offspring::PoissonFamily>(&offspring_)) {
    if (const auto* fl = std::get_if<decay::FiniteList>(&pf->decay)) {
      return static_cast<std::int64_t>(fl->values.size());
    }
    return std::nullopt;
  }
  return static_cast<std::int64_t>(std::get<offspring::Explicit>(offspring_).laws.size());
}

double InarModel::mean_tail(std::int64_t K) const {
  K = std::max<std::int64_t>(K, 0);
  if (const auto* pf = std::get_if<offspring::PoissonFamily>(&offspring_)) {
    if (const auto* g = std::get_if<decay::Geometric>(&pf->decay)) {
      return g->c * std::pow(g->r, static_cast<double>(K)) / (1.0 - g->r);
    }
    if (const auto* p = std::get_if<decay::PowerLaw>(&pf->decay)) {
      if (p->c == 0.0) return 0.0;
      return p->c * power_tail_sum(p->a, K + 1);
    }
  }
  const auto len = *finite_length();
  double s = 0.0;
  for (std::int64_t k = len; k > K; --k) s += offspring_mean(k);
  return s;
}

std::vector<double> InarModel::lag_means(std::int64_t count) const {
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = offspring_mean(static_cast<std::int64_t>(i) + 1);
  return out;
}

std::vector<double> InarModel::lag_variances(std::int64_t count) const {
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = offspring_variance(static_cast<std::int64_t>(i) + 1);
  return out;
}

bool InarModel::is_deterministic() const {
  if (!immigration_.is_degenerate()) return false;
  if (is_poisson_family()) return offspring_mean_l1(*this) == 0.0;
  for (const auto& law : std::get<offspring::Explicit>(offspring_).laws) {
    if (!law.is_degenerate()) return false;
  }
  return true;
}

double offspring_mean_l1(const InarModel& m) {
  if (!m.mean_l1_) throw DivergentSeries("||E[xi]||_1 diverges (power-law exponent <= 1)");
  return *m.mean_l1_;
}

double offspring_var_l1(const InarModel& m) {
  if (!m.var_l1_) throw DivergentSeries("||Var[xi]||_1 diverges (power-law exponent <= 1)");
  return *m.var_l1_;
}

std::int64_t effective_horizon(const InarModel& m, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("effective_horizon: tol must be positive");
  if (const auto len = m.finite_length()) {
    std::int64_t last = *len;
    while (last > 0 && m.offspring_mean(last) == 0.0) --last;
    return last;
  }
  const auto& decay_law = std::get<offspring::PoissonFamily>(m.offspring()).decay;
  if (const auto* g = std::get_if<decay::Geometric>(&decay_law)) {
    if (g->c == 0.0) return 0;
    // tail(K) = c r^K / (1 - r); solve, then settle the integer exactly.
    const double guess = std::log(tol * (1.0 - g->r) / g->c) / std::log(g->r);
    std::int64_t K = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(guess)) - 2);
    while (m.mean_tail(K) >= tol) ++K;
    while (K > 0 && m.mean_tail(K - 1) < tol) --K;
    return K;
  }
  const auto& p = std::get<decay::PowerLaw>(decay_law);
  if (p.c == 0.0) return 0;
  if (p.a <= 1.0) return kMaxHorizon;
  // Sum_{k > K} c k^-a <= c K^(1-a) / (a - 1).
  const double K = std::ceil(std::pow(p.c / ((p.a - 1.0) * tol), 1.0 / (p.a - 1.0)));
  if (!(K < static_cast<double>(kMaxHorizon))) return kMaxHorizon;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(K));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

bool AssumptionReport::holds(const std::string& item) const {
  if (item == "a") return a.verdict == Verdict::holds;
  if (item == "b1") return b1.verdict == Verdict::holds;
  if (item == "b2") return b2.verdict == Verdict::holds;
  if (item == "c") return c.verdict == Verdict::holds;
  throw std::invalid_argument("unknown assumption item: " + item);
}

namespace {

AssumptionCheck check_a(const InarModel& m) {
  double norm = 0.0;
  try {
    norm = offspring_mean_l1(m);
    offspring_var_l1(m);
  } catch (const DivergentSeries&) {
    return {Verdict::fails, std::nullopt, std::nullopt, "||E[xi]||_1 diverges"};
  }
  if (norm < 1.0) return {Verdict::holds, norm, std::nullopt, "||E[xi]||_1 = " + fmt(norm) + " < 1"};
  return {Verdict::fails, norm, std::nullopt, "||E[xi]||_1 = " + fmt(norm) + " >= 1 (not subcritical)"};
}

AssumptionCheck check_c(const InarModel& m) {
  const double em = m.immigration().mean();
  const double ev = m.immigration().variance();
  if (std::isfinite(em) && std::isfinite(ev)) {
    return {Verdict::holds, em, std::nullopt, "E[eps] = " + fmt(em) + ", Var[eps] = " + fmt(ev)};
  }
  return {Verdict::fails, std::nullopt, std::nullopt, "immigration moments are not finite"};
}

}  // namespace

AssumptionReport validate(const InarModel& m) {
  AssumptionReport r;
  r.a = check_a(m);

  const auto* pf = std::get_if<offspring::PoissonFamily>(&m.offspring());
  const double c1 = pf ? weighted_sup(pf->decay, 1.5) : explicit_weighted_sup(std::get<offspring::Explicit>(m.offspring()), 1.5);
  if (std::isfinite(c1)) {
    r.b1 = {Verdict::holds, c1, 1.5, "sup n^1.5 E[xi_n] = " + fmt(c1)};
  } else {
    r.b1 = {Verdict::fails, std::nullopt, 1.5, "n^1.5 E[xi_n] is unbounded"};
  }

  if (pf != nullptr && std::holds_alternative<decay::PowerLaw>(pf->decay)) {
    const auto& p = std::get<decay::PowerLaw>(pf->decay);
    if (p.c == 0.0 || p.a > 1.5) {
      r.b2 = {Verdict::holds, p.c, p.c == 0.0 ? 2.0 : p.a, "power-law exponent exceeds 3/2"};
    } else {
      r.b2 = {Verdict::fails, std::nullopt, std::nullopt, "power-law exponent " + fmt(p.a) + " <= 3/2"};
    }
  } else {
    const double c2 = pf ? weighted_sup(pf->decay, 2.0) : explicit_weighted_sup(std::get<offspring::Explicit>(m.offspring()), 2.0);
    const bool finite_seq = m.finite_length().has_value();
    r.b2 = {Verdict::holds, c2, 2.0,
            finite_seq ? "finitely many nonzero xi_k; witnessed with a = 2"
                       : "geometric decay; witnessed with a = 2"};
  }

  r.c = check_c(m);
  return r;
}

void require_lln_assumptions(const InarModel& m) {
  if (const auto a = check_a(m); a.verdict != Verdict::holds) {
    throw AssumptionViolation("a", "Assumption (a) violated: " + a.note);
  }
  if (const auto c = check_c(m); c.verdict != Verdict::holds) {
    throw AssumptionViolation("c", "Assumption (c) violated: " + c.note);
  }
}

}  // namespace inar
