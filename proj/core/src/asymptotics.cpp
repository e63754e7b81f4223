#include "inar/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <stdexcept>
#include <string>

#include "inar/errors.hpp"
#include "numeric.hpp"

namespace inar {

using detail::kInf;

namespace {

constexpr int kMaxExpansions = 64;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Bisection on a predicate that is true on [lo, root) and false on [root, hi].
// Runs until the bracket cannot be split in floating point.
template <class Below>
std::pair<double, double> bisect(double lo, double hi, Below below) {
  for (int it = 0; it < 2200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (below(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

std::optional<std::int64_t> total_max_support(const InarModel& m) {
  const auto* ex = std::get_if<offspring::Explicit>(&m.offspring());
  if (!ex) return std::nullopt;
  std::int64_t total = 0;
  for (const auto& law : ex->laws) {
    const auto s = law.max_support();
    if (!s) return std::nullopt;
    total += *s;
  }
  return total;
}

double offspring_domain_sup(const InarModel& m) {
  const auto* ex = std::get_if<offspring::Explicit>(&m.offspring());
  if (!ex) return kInf;
  double sup = kInf;
  for (const auto& law : ex->laws) sup = std::min(sup, law.log_mgf_domain_sup());
  return sup;
}

// theta_c is the floating-point maximum of F; a theta within a few ulps above it
// (e.g. the closed form) still counts as critical.
bool within_rounding_of_critical(const CriticalTilt& tc, double theta) {
  return tc.attained && theta > tc.value && theta - tc.value <= 8.0 * kEps * std::max(1.0, std::fabs(tc.value));
}

double f_infinity_with(const InarModel& m, const CriticalTilt& tc, double theta) {
  if (std::isnan(theta)) throw std::invalid_argument("f_infinity: theta is NaN");
  if (within_rounding_of_critical(tc, theta)) return *tc.maximizer;
  if (theta > tc.value || (!tc.attained && theta >= tc.value)) {
    throw NoSolution("F(x) = " + std::to_string(theta) + " has no solution: theta_c = " + std::to_string(tc.value) +
                     (tc.attained ? "" : " (not attained)"));
  }
  if (theta == 0.0) return 0.0;

  double hi = 0.0;
  if (tc.attained) {
    hi = *tc.maximizer;
  } else {
    hi = std::max(1.0, theta);
    for (int i = 0; i < kMaxExpansions && big_F(m, hi) < theta; ++i) hi *= 2.0;
  }
  double lo = 0.0;
  if (theta < 0.0) {
    // F(x) <= (1 - ||E[xi]||_1) x for x < 0, so this point lies left of the root.
    lo = theta / (1.0 - offspring_mean_l1(m));
    for (int i = 0; i < kMaxExpansions && big_F(m, lo) > theta; ++i) lo *= 2.0;
  }
  const auto [a, b] = bisect(lo, hi, [&](double x) { return big_F(m, x) < theta; });
  return std::fabs(big_F(m, a) - theta) <= std::fabs(big_F(m, b) - theta) ? a : b;
}

double gamma_with(const InarModel& m, const CriticalTilt& tc, double theta) {
  if (theta > tc.value && !within_rounding_of_critical(tc, theta)) return kInf;
  if (!tc.attained && theta >= tc.value) {
    const auto top = m.immigration().max_support();
    return (top && *top == 0) ? 0.0 : kInf;
  }
  return m.immigration().log_mgf(f_infinity_with(m, tc, theta));
}

double gamma_derivative_with(const InarModel& m, const CriticalTilt& tc, double theta) {
  const double f = f_infinity_with(m, tc, theta);
  const double slope = big_F_derivative(m, f);
  if (!(slope > 0.0)) return kInf;
  return m.immigration().tilted_mean(f) / slope;
}

double minus_log_zero_mass(const CountDistribution& d) {
  const double p0 = d.pmf(0);
  return p0 > 0.0 ? -std::log(p0) : kInf;
}

}  // namespace

double lln_mu(const InarModel& m) {
  require_lln_assumptions(m);
  return m.immigration().mean() / (1.0 - offspring_mean_l1(m));
}

double clt_sigma2(const InarModel& m) {
  require_lln_assumptions(m);
  const double mbar = offspring_mean_l1(m);
  const double gap = 1.0 - mbar;
  const auto& eps = m.immigration();
  return (eps.mean() * offspring_var_l1(m) + eps.variance() * gap) / (gap * gap * gap);
}

double mdp_rate_J(const InarModel& m, double x) {
  const double s2 = clt_sigma2(m);
  if (!(s2 > 0.0)) throw DegenerateModel("moderate deviation rate undefined: sigma^2 = 0 (no randomness)");
  return x * x / (2.0 * s2);
}

double big_F(const InarModel& m, double x) {
  const double s = m.offspring_log_mgf_sum(x);
  if (!(s < kInf)) return -kInf;
  return x - s;
}

double big_F_derivative(const InarModel& m, double x) {
  const double s = m.offspring_tilted_mean_sum(x);
  if (!(s < kInf)) return -kInf;
  return 1.0 - s;
}

CriticalTilt theta_c(const InarModel& m) {
  require_lln_assumptions(m);
  CriticalTilt out;
  if (offspring_mean_l1(m) == 0.0) {
    out.value = kInf;
    return out;
  }
  if (const auto total = total_max_support(m); total && *total <= 1) {
    // Exactly one lag carries a {0,1}-valued law; F increases to -log P(xi_k = 1).
    for (const auto& law : std::get<offspring::Explicit>(m.offspring()).laws) {
      if (law.max_support() == 1) {
        out.value = -std::log(law.pmf(1));
        return out;
      }
    }
  }

  const double sup = offspring_domain_sup(m);
  double hi = 1.0;
  if (sup < kInf) {
    hi = sup;
  } else {
    for (int i = 0; i < 2 * kMaxExpansions && big_F_derivative(m, hi) > 0.0; ++i) hi *= 2.0;
  }
  const auto [a, b] = bisect(0.0, hi, [&](double x) { return big_F_derivative(m, x) > 0.0; });
  const double fa = big_F(m, a);
  const double fb = big_F(m, b);
  out.attained = true;
  out.maximizer = fa >= fb ? a : b;
  out.value = std::max(fa, fb);
  return out;
}

double f_infinity(const InarModel& m, double theta) { return f_infinity_with(m, theta_c(m), theta); }

double gamma(const InarModel& m, double theta) { return gamma_with(m, theta_c(m), theta); }

double gamma_derivative(const InarModel& m, double theta) {
  return gamma_derivative_with(m, theta_c(m), theta);
}

double ldp_rate_I(const InarModel& m, double x) {
  const CriticalTilt tc = theta_c(m);
  const auto& eps = m.immigration();
  if (std::isnan(x)) return x;
  if (x < 0.0) return kInf;
  if (x == 0.0) return minus_log_zero_mass(eps);
  if (eps.max_support() == 0) return tc.value < kInf ? tc.value * x : kInf;

  auto slope = [&](double t) { return gamma_derivative_with(m, tc, t); };
  auto objective = [&](double t) { return t * x - gamma_with(m, tc, t); };

  double hi = 0.0;
  if (tc.attained) {
    hi = tc.value;
    if (slope(hi) <= x) return std::max(0.0, objective(hi));
  } else if (tc.value < kInf) {
    const double scale = std::max(1.0, std::fabs(tc.value));
    bool found = false;
    double cand = tc.value;
    for (int j = 1; j <= 60; ++j) {
      cand = tc.value - std::ldexp(scale, -j);
      if (slope(cand) > x) {
        found = true;
        break;
      }
    }
    if (!found) return std::max(0.0, objective(cand));
    hi = cand;
  } else {
    hi = 1.0;
    int i = 0;
    for (; i < kMaxExpansions && slope(hi) <= x; ++i) hi *= 2.0;
    if (i == kMaxExpansions) return kInf;
  }

  double lo = 0.0;
  if (!(slope(0.0) < x)) {
    lo = -1.0;
    int i = 0;
    for (; i < kMaxExpansions && slope(lo) >= x; ++i) lo *= 2.0;
    if (i == kMaxExpansions) return kInf;
  }
  const auto [a, b] = bisect(lo, hi, [&](double t) { return slope(t) < x; });
  return std::max(0.0, std::max(objective(a), objective(b)));
}

double inar1_rate_I(const CountDistribution& eps, const CountDistribution& xi1, double x) {
  if (!(xi1.mean() < 1.0)) throw AssumptionViolation("a", "Assumption (a) fails: E[xi_1] >= 1");
  if (std::isnan(x)) return x;
  if (x < 0.0) return kInf;
  if (x == 0.0) return minus_log_zero_mass(eps);

  auto objective = [&](double psi) { return x * (psi - xi1.log_mgf(psi)) - eps.log_mgf(psi); };
  auto slope = [&](double psi) {
    const double a = xi1.tilted_mean(psi);
    const double b = eps.tilted_mean(psi);
    if (!(a < kInf) || !(b < kInf)) return -kInf;
    return x * (1.0 - a) - b;
  };

  const double sup = std::min(xi1.log_mgf_domain_sup(), eps.log_mgf_domain_sup());
  double hi = 1.0;
  if (sup < kInf) {
    hi = sup;
  } else {
    int i = 0;
    for (; i < kMaxExpansions && slope(hi) >= 0.0; ++i) hi *= 2.0;
    if (i == kMaxExpansions) return kInf;
  }
  double lo = 0.0;
  if (!(slope(0.0) > 0.0)) {
    lo = -1.0;
    int i = 0;
    for (; i < kMaxExpansions && slope(lo) <= 0.0; ++i) lo *= 2.0;
    if (i == kMaxExpansions) return kInf;
  }
  const auto [a, b] = bisect(lo, hi, [&](double psi) { return slope(psi) > 0.0; });
  double best = objective(a);
  if (b < sup) best = std::max(best, objective(b));
  return std::max(0.0, best);
}

TheorySummary summarize(const InarModel& m) {
  TheorySummary s;
  s.mu = lln_mu(m);
  s.sigma2 = clt_sigma2(m);
  s.theta_c = theta_c(m);
  s.offspring_mean_l1 = offspring_mean_l1(m);
  s.offspring_var_l1 = offspring_var_l1(m);
  return s;
}

}  // namespace inar
