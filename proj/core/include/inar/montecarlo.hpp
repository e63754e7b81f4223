#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inar/model.hpp"

namespace inar {

/// One compared quantity: pass iff lower <= statistic <= upper.
struct ReportCheck {
  std::string name;
  double statistic = 0.0;
  double target = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool pass() const;
};

struct ValidationReport {
  std::string theorem;  // lln | clt | mdp | ldp-gamma | cesaro | oracle
  std::string model_fingerprint;
  std::int64_t n = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  std::vector<ReportCheck> checks;
  /// Free-form context (band provenance, intermediate numbers).
  nlohmann::json metadata = nlohmann::json::object();
  double runtime_seconds = 0.0;

  /// True iff every check passes; derived from the stored numbers only.
  bool pass() const;
};

nlohmann::json to_json(const ValidationReport& r);
/// CSV header for write_report_csv_row.
void write_report_csv_header(std::ostream& os);
/// theorem,n,reps,seed,checks,failed,pass,runtime_seconds
void write_report_csv_row(std::ostream& os, const ValidationReport& r);

struct ValidationOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Replace the theoretical mu (negative controls).
  std::optional<double> mu_override;
  /// Replace the theoretical sigma^2 (negative controls).
  std::optional<double> sigma2_override;
};

/// Mean of S_n / n over reps against mu, band 4 sqrt(sigma^2 / (n reps)).
ValidationReport validate_lln(const InarModel& m, std::int64_t n, std::uint64_t reps, std::uint64_t seed,
                              const ValidationOptions& options = {});

/// Minimum replication count for the Kolmogorov-Smirnov checks.
inline constexpr std::uint64_t kMinCltReps = 500;

/// One-sample KS of (S_n - n mu) / sqrt(n sigma^2) against N(0,1), critical value 1.95 / sqrt(reps).
ValidationReport validate_clt(const InarModel& m, std::int64_t n, std::uint64_t reps, std::uint64_t seed,
                              const ValidationOptions& options = {});

/// Smallest reps whose expected count of (S_n - n mu)/n^beta >= x reaches
/// min_count under the normal approximation.
std::uint64_t mdp_required_reps(const InarModel& m, double beta, std::int64_t n, double x, double min_count = 50.0);

/// R = -(n / c^2) log p_hat with c = n^beta, against J(x); band [0.6, 1.4] J(x).
/// Throws InsufficientTailMass when reps is too small for 50 expected exceedances.
ValidationReport validate_mdp(const InarModel& m, double beta, std::int64_t n, std::uint64_t reps, double x,
                              std::uint64_t seed, const ValidationOptions& options = {});

/// Bootstrap resamples used for the standard error in validate_gamma.
inline constexpr int kBootstrapResamples = 200;

/// (1/n) log mean exp(theta S_n) against Gamma(theta) for every grid theta
/// (tolerance max(0.02, 3 bootstrap SE)), plus the noise-free check
/// |(1/exact_n) log E[exp(theta S_exact_n)] - Gamma(theta)| < 1e-3.
ValidationReport validate_gamma(const InarModel& m, const std::vector<double>& theta_grid, std::int64_t n,
                                std::uint64_t reps, std::uint64_t seed, const ValidationOptions& options = {},
                                std::int64_t exact_n = 100000);

/// Cesaro means of G1, G1^2, G2 at horizon n within rel_tol of their limits.
ValidationReport validate_cesaro(const InarModel& m, std::int64_t n, double rel_tol = 0.01);

/// |log_mgf_exact - oracle_log_mgf| < tol for every n in 1..max_n and theta in the grid.
ValidationReport validate_oracle(const InarModel& m, std::int64_t max_n, const std::vector<double>& theta_grid,
                                 double tol = 1e-10);

/// The theta set used by the oracle equivalence checks: {-1, -0.3, 0, 0.4, ln 2}.
std::vector<double> oracle_theta_grid();

/// Standard normal CDF.
double normal_cdf(double z);
/// sup |F_n - Phi| of the sample against N(0,1). Sorts a copy.
double ks_statistic_normal(std::vector<double> sample);

}  // namespace inar
