#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "inar/model.hpp"

namespace inar {

/// f_1(theta) = theta, f_k(theta) = theta + sum_{i<k} log E[exp(f_i xi_{k-i})],
/// and the exact log E[exp(theta S_n)] = sum_k log E[exp(f_k eps)].
struct MgfRecursion {
  double theta = 0.0;
  /// f_1..f_m; m < n when the recursion stopped on a divergent term.
  std::vector<double> f_values;
  /// +inf when any term diverged.
  double log_mgf_total = 0.0;

  bool diverged() const;
};

/// Lag sums run over 1..min(k-1, m.horizon()).
MgfRecursion f_sequence(const InarModel& m, double theta, std::int64_t n);

/// log E[exp(theta S_n)] for the empty-history process.
double log_mgf_exact(const InarModel& m, double theta, std::int64_t n);

/// First- and second-order coefficient sequences of the tilted recursion:
///   G1(k) = 1 + sum_i E[xi_i] G1(k-i),                  G1(1) = 1
///   G2(k) = sum_i E[xi_i] G2(k-i) + 1/2 sum_i Var[xi_i] G1(k-i)^2,   G2(1) = 0
struct GbarTables {
  std::vector<double> g1;
  std::vector<double> g2;
  /// Prefix sums: sum_g1[k-1] = sum_{j <= k} G1(j); likewise for G1^2 and G2.
  std::vector<double> sum_g1;
  std::vector<double> sum_g1_sq;
  std::vector<double> sum_g2;

  double g1_bound = 0.0;  // 1 / (1 - ||E[xi]||_1)
  double g2_bound = 0.0;  // ||Var[xi]||_1 / (2 (1 - ||E[xi]||_1)^3)
};

/// Builds the tables in one forward pass (lags truncated at m.horizon()) and
/// checks both uniform bounds on every entry, throwing BoundViolation on failure.
GbarTables gbar_tables(const InarModel& m, std::int64_t n);

struct CesaroPair {
  double empirical = 0.0;
  double limit = 0.0;
  double relative_error() const;
};

struct CesaroCheck {
  CesaroPair g1;
  CesaroPair g1_squared;
  CesaroPair g2;
};

/// Cesaro means (1/n) sum of G1, G1^2, G2 against their limits.
CesaroCheck cesaro_check(const InarModel& m, std::int64_t n);

/// c(n) = n^beta with 1/2 < beta < 1, evaluated over a grid of horizons.
struct MdpSchedule {
  double beta = 0.75;
  std::vector<std::int64_t> horizons;

  MdpSchedule(double beta, std::vector<std::int64_t> horizons);
  double speed(std::int64_t n) const;  // c(n)
};

struct MdpCurvePoint {
  std::int64_t n = 0;
  /// (n / c(n)^2) (log E[exp(c(n) theta S_n / n)] - c(n) theta mu); nullopt when divergent.
  std::optional<double> value;
};

/// The theta^2 sigma^2 / 2 target the curve approaches.
double mdp_mgf_limit(const InarModel& m, double theta);

std::vector<MdpCurvePoint> mdp_mgf_curve(const InarModel& m, double theta, const MdpSchedule& schedule);

// CSV exports used by the command-line tool.
void write_f_sequence_csv(std::ostream& os, const MgfRecursion& r);
void write_gbar_csv(std::ostream& os, const GbarTables& t);
/// CSV "n,value,limit"; divergent points print "inf".
void write_mdp_curve_csv(std::ostream& os, const std::vector<MdpCurvePoint>& curve, double limit);

}  // namespace inar
