#include "inar/recursions.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "inar/asymptotics.hpp"
#include "inar/errors.hpp"
#include "numeric.hpp"

namespace inar {

using detail::CompensatedSum;
using detail::kInf;

bool MgfRecursion::diverged() const { return !(log_mgf_total < kInf); }

MgfRecursion f_sequence(const InarModel& m, double theta, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("f_sequence: n must be >= 1");
  MgfRecursion r;
  r.theta = theta;
  r.f_values.reserve(static_cast<std::size_t>(n));
  const std::int64_t lags = std::min<std::int64_t>(n - 1, m.horizon());
  const auto& eps = m.immigration();

  CompensatedSum total;
  auto push = [&](double f) {
    const double term = eps.log_mgf(f);
    r.f_values.push_back(f);
    if (!(term < kInf) || std::isnan(f)) return false;
    total.add(term);
    return true;
  };

  if (m.is_poisson_family()) {
    // Each lag contributes alpha_j * expm1(f_{k-j}); cache expm1 once per f.
    const auto alpha = m.lag_means(lags);
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 1; k <= n; ++k) {
      CompensatedSum f;
      f.add(theta);
      const std::int64_t upto = std::min(k - 1, lags);
      for (std::int64_t j = 1; j <= upto; ++j) {
        f.add(alpha[static_cast<std::size_t>(j - 1)] * e[static_cast<std::size_t>(k - j - 1)]);
      }
      const double fk = f.value();
      if (!(fk < kInf) || !push(fk)) {
        r.log_mgf_total = kInf;
        return r;
      }
      e.push_back(std::expm1(fk));
    }
  } else {
    std::vector<CountDistribution> laws;
    for (std::int64_t j = 1; j <= lags; ++j) laws.push_back(m.offspring_law(j));
    for (std::int64_t k = 1; k <= n; ++k) {
      CompensatedSum f;
      f.add(theta);
      const std::int64_t upto = std::min(k - 1, lags);
      bool finite = true;
      for (std::int64_t j = 1; j <= upto && finite; ++j) {
        const double term = laws[static_cast<std::size_t>(j - 1)].log_mgf(r.f_values[static_cast<std::size_t>(k - j - 1)]);
        if (!(term < kInf)) finite = false;
        f.add(term);
      }
      if (!finite || !push(f.value())) {
        r.log_mgf_total = kInf;
        return r;
      }
    }
  }
  r.log_mgf_total = total.value();
  return r;
}

double log_mgf_exact(const InarModel& m, double theta, std::int64_t n) {
  return f_sequence(m, theta, n).log_mgf_total;
}

GbarTables gbar_tables(const InarModel& m, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("gbar_tables: n must be >= 1");
  const double mbar = offspring_mean_l1(m);
  if (!(mbar < 1.0)) throw AssumptionViolation("a", "Assumption (a) fails: ||E[xi]||_1 = " + std::to_string(mbar) + " >= 1");
  const double vnorm = offspring_var_l1(m);

  GbarTables t;
  t.g1_bound = 1.0 / (1.0 - mbar);
  t.g2_bound = vnorm / (2.0 * std::pow(1.0 - mbar, 3));

  const std::int64_t lags = std::min<std::int64_t>(n - 1, m.horizon());
  const auto a = m.lag_means(lags);
  const auto v = m.lag_variances(lags);
  const auto size = static_cast<std::size_t>(n);
  t.g1.resize(size);
  t.g2.resize(size);
  t.sum_g1.resize(size);
  t.sum_g1_sq.resize(size);
  t.sum_g2.resize(size);

  CompensatedSum s1, s1sq, s2;
  for (std::int64_t k = 1; k <= n; ++k) {
    double g1 = 1.0;
    double g2 = 0.0;
    const std::int64_t upto = std::min(k - 1, lags);
    for (std::int64_t i = 1; i <= upto; ++i) {
      const double prev1 = t.g1[static_cast<std::size_t>(k - i - 1)];
      g1 += a[static_cast<std::size_t>(i - 1)] * prev1;
      g2 += a[static_cast<std::size_t>(i - 1)] * t.g2[static_cast<std::size_t>(k - i - 1)] +
            0.5 * v[static_cast<std::size_t>(i - 1)] * prev1 * prev1;
    }
    if (!(g1 > 0.0 && g1 <= t.g1_bound)) {
      throw BoundViolation("G1(" + std::to_string(k) + ") = " + std::to_string(g1) + " breaks the bound " +
                           std::to_string(t.g1_bound));
    }
    if (!(g2 >= 0.0 && g2 <= t.g2_bound)) {
      throw BoundViolation("G2(" + std::to_string(k) + ") = " + std::to_string(g2) + " breaks the bound " +
                           std::to_string(t.g2_bound));
    }
    const auto idx = static_cast<std::size_t>(k - 1);
    t.g1[idx] = g1;
    t.g2[idx] = g2;
    s1.add(g1);
    s1sq.add(g1 * g1);
    s2.add(g2);
    t.sum_g1[idx] = s1.value();
    t.sum_g1_sq[idx] = s1sq.value();
    t.sum_g2[idx] = s2.value();
  }
  return t;
}

double CesaroPair::relative_error() const {
  if (limit == 0.0) return std::fabs(empirical);
  return std::fabs(empirical - limit) / std::fabs(limit);
}

CesaroCheck cesaro_check(const InarModel& m, std::int64_t n) {
  const auto t = gbar_tables(m, n);
  const double mbar = offspring_mean_l1(m);
  const double inv = 1.0 / (1.0 - mbar);
  const double nd = static_cast<double>(n);
  CesaroCheck c;
  c.g1 = {t.sum_g1.back() / nd, inv};
  c.g1_squared = {t.sum_g1_sq.back() / nd, inv * inv};
  c.g2 = {t.sum_g2.back() / nd, t.g2_bound};
  return c;
}

MdpSchedule::MdpSchedule(double b, std::vector<std::int64_t> grid) : beta(b), horizons(std::move(grid)) {
  if (!(beta > 0.5 && beta < 1.0)) throw std::invalid_argument("MdpSchedule: beta must lie in (0.5, 1)");
  for (auto n : horizons) {
    if (n < 2) throw std::invalid_argument("MdpSchedule: every horizon must be >= 2");
  }
}

double MdpSchedule::speed(std::int64_t n) const { return std::pow(static_cast<double>(n), beta); }

double mdp_mgf_limit(const InarModel& m, double theta) { return 0.5 * theta * theta * clt_sigma2(m); }

std::vector<MdpCurvePoint> mdp_mgf_curve(const InarModel& m, double theta, const MdpSchedule& schedule) {
  const double mu = lln_mu(m);
  std::vector<MdpCurvePoint> out;
  out.reserve(schedule.horizons.size());
  for (auto n : schedule.horizons) {
    const double c = schedule.speed(n);
    const double nd = static_cast<double>(n);
    MdpCurvePoint p;
    p.n = n;
    const double lm = log_mgf_exact(m, c * theta / nd, n);
    if (lm < kInf) p.value = (nd / (c * c)) * (lm - c * theta * mu);
    out.push_back(p);
  }
  return out;
}

void write_f_sequence_csv(std::ostream& os, const MgfRecursion& r) {
  const auto old = os.precision(17);
  os << "k,f\n";
  for (std::size_t i = 0; i < r.f_values.size(); ++i) os << (i + 1) << ',' << r.f_values[i] << '\n';
  os.precision(old);
}

void write_gbar_csv(std::ostream& os, const GbarTables& t) {
  const auto old = os.precision(17);
  os << "k,g1,g2\n";
  for (std::size_t i = 0; i < t.g1.size(); ++i) os << (i + 1) << ',' << t.g1[i] << ',' << t.g2[i] << '\n';
  os.precision(old);
}

void write_mdp_curve_csv(std::ostream& os, const std::vector<MdpCurvePoint>& curve, double limit) {
  const auto old = os.precision(17);
  os << "n,value,limit\n";
  for (const auto& p : curve) {
    os << p.n << ',';
    if (p.value) {
      os << *p.value;
    } else {
      os << "inf";
    }
    os << ',' << limit << '\n';
  }
  os.precision(old);
}

}  // namespace inar
