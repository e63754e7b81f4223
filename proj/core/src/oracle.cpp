#include "inar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "inar/errors.hpp"
#include "numeric.hpp"

namespace inar {

using detail::CompensatedSum;

namespace {

using Pmf = std::vector<double>;

Pmf pmf_table(const CountDistribution& d, const std::string& what) {
  const auto top = d.max_support();
  if (!top) throw UnboundedSupport(what + " (" + d.name() + ") has unbounded support; the exact oracle needs bounded laws");
  Pmf out(static_cast<std::size_t>(*top) + 1);
  for (std::int64_t k = 0; k <= *top; ++k) out[static_cast<std::size_t>(k)] = d.pmf(k);
  return out;
}

Pmf convolve(const Pmf& a, const Pmf& b) {
  Pmf out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// pmf of the sum of `count` independent copies, memoized per count.
class ConvolutionPowers {
 public:
  explicit ConvolutionPowers(Pmf base) : powers_{Pmf{1.0}}, base_(std::move(base)) {}
  const Pmf& get(std::int64_t count) {
    while (static_cast<std::int64_t>(powers_.size()) <= count) powers_.push_back(convolve(powers_.back(), base_));
    return powers_[static_cast<std::size_t>(count)];
  }

 private:
  std::vector<Pmf> powers_;
  Pmf base_;
};

}  // namespace

double ExactLaw::total_mass() const {
  CompensatedSum s;
  for (const auto& [_, p] : pmf) s.add(p);
  return s.value();
}

ExactLaw enumerate_sn(const InarModel& m, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("enumerate_sn: n must be >= 1");
  const Pmf eps = pmf_table(m.immigration(), "immigration");

  std::vector<ConvolutionPowers> offspring;
  std::vector<std::int64_t> offspring_top;
  if (const auto* ex = std::get_if<offspring::Explicit>(&m.offspring())) {
    for (std::size_t k = 0; k < ex->laws.size(); ++k) {
      Pmf p = pmf_table(ex->laws[k], "offspring law xi_" + std::to_string(k + 1));
      offspring_top.push_back(static_cast<std::int64_t>(p.size()) - 1);
      offspring.emplace_back(std::move(p));
    }
  } else if (offspring_mean_l1(m) > 0.0) {
    throw UnboundedSupport("Poisson offspring has unbounded support; the exact oracle needs bounded laws");
  }
  while (!offspring_top.empty() && offspring_top.back() == 0) {
    offspring_top.pop_back();
    offspring.pop_back();
  }
  const auto window = static_cast<std::int64_t>(offspring.size());

  // Worst-case state count, checked before enumerating.
  std::vector<double> xmax(static_cast<std::size_t>(n));
  double smax = 0.0;
  for (std::int64_t t = 0; t < n; ++t) {
    double top = static_cast<double>(eps.size() - 1);
    for (std::int64_t k = 1; k <= std::min(t, window); ++k) {
      top += static_cast<double>(offspring_top[static_cast<std::size_t>(k - 1)]) * xmax[static_cast<std::size_t>(t - k)];
    }
    xmax[static_cast<std::size_t>(t)] = top;
    smax += top;
    double states = smax + 1.0;
    for (std::int64_t j = 0; j < std::min(t + 1, window); ++j) states *= xmax[static_cast<std::size_t>(t - j)] + 1.0;
    if (states > static_cast<double>(kOracleStateCap)) {
      throw StateExplosion("exact enumeration needs up to " + std::to_string(states) + " states at step " +
                           std::to_string(t + 1) + " (cap " + std::to_string(kOracleStateCap) + ")");
    }
  }

  // window (oldest first) -> partial sum -> probability
  using Layer = std::map<std::vector<std::int64_t>, std::map<std::int64_t, CompensatedSum>>;
  Layer layer;
  layer[{}][0].add(1.0);
  for (std::int64_t t = 0; t < n; ++t) {
    Layer next;
    for (const auto& [w, sums] : layer) {
      Pmf x = eps;
      const auto len = static_cast<std::int64_t>(w.size());
      for (std::int64_t k = 1; k <= len; ++k) {
        const std::int64_t parents = w[static_cast<std::size_t>(len - k)];
        if (parents == 0) continue;
        x = convolve(x, offspring[static_cast<std::size_t>(k - 1)].get(parents));
      }
      for (std::size_t v = 0; v < x.size(); ++v) {
        if (x[v] == 0.0) continue;
        std::vector<std::int64_t> nw(w);
        nw.push_back(static_cast<std::int64_t>(v));
        if (static_cast<std::int64_t>(nw.size()) > window) nw.erase(nw.begin());
        auto& dest = next[nw];
        for (const auto& [s, p] : sums) dest[s + static_cast<std::int64_t>(v)].add(p.value() * x[v]);
      }
    }
    layer = std::move(next);
  }

  std::map<std::int64_t, CompensatedSum> acc;
  for (const auto& [_, sums] : layer) {
    for (const auto& [s, p] : sums) acc[s].add(p.value());
  }
  ExactLaw law;
  for (const auto& [s, p] : acc) {
    if (p.value() > 0.0) law.pmf[s] = p.value();
  }
  return law;
}

double oracle_log_mgf(const ExactLaw& law, double theta) {
  if (theta == 0.0) return 0.0;
  std::vector<double> terms;
  terms.reserve(law.pmf.size());
  for (const auto& [s, p] : law.pmf) terms.push_back(theta * static_cast<double>(s) + std::log(p));
  return detail::log_sum_exp(terms);
}

double oracle_log_mgf(const InarModel& m, double theta, std::int64_t n) {
  return oracle_log_mgf(enumerate_sn(m, n), theta);
}

ExactMoments oracle_moments(const ExactLaw& law) {
  CompensatedSum mean;
  for (const auto& [s, p] : law.pmf) mean.add(static_cast<double>(s) * p);
  ExactMoments out;
  out.mean = mean.value();
  CompensatedSum var;
  for (const auto& [s, p] : law.pmf) {
    const double d = static_cast<double>(s) - out.mean;
    var.add(d * d * p);
  }
  out.variance = var.value();
  return out;
}

ExactMoments oracle_moments(const InarModel& m, std::int64_t n) { return oracle_moments(enumerate_sn(m, n)); }

void write_exact_law_csv(std::ostream& os, const ExactLaw& law) {
  const auto old = os.precision(17);
  os << "s,prob\n";
  for (const auto& [s, p] : law.pmf) os << s << ',' << p << '\n';
  os.precision(old);
}

}  // namespace inar
