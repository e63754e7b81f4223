#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "inar/distributions.hpp"

namespace inar {

/// Certified truncation tolerance for every infinite offspring series.
inline constexpr double kTruncationTol = 1e-12;

namespace decay {
/// alpha_k = c * r^(k-1)
struct Geometric {
  double c;
  double r;
  bool operator==(const Geometric&) const = default;
};
/// alpha_k = c * k^(-a)
struct PowerLaw {
  double c;
  double a;
  bool operator==(const PowerLaw&) const = default;
};
/// alpha_k = values[k-1], zero beyond.
struct FiniteList {
  std::vector<double> values;
  bool operator==(const FiniteList&) const = default;
};
}  // namespace decay

using DecayLaw = std::variant<decay::Geometric, decay::PowerLaw, decay::FiniteList>;

namespace offspring {
/// xi_k ~ laws[k-1] for k <= laws.size(), xi_k = 0 beyond.
struct Explicit {
  std::vector<CountDistribution> laws;
  bool operator==(const Explicit&) const = default;
};
/// xi_k ~ Poisson(alpha_k) with alpha_k from the decay law.
struct PoissonFamily {
  DecayLaw decay;
  bool operator==(const PoissonFamily&) const = default;
};
}  // namespace offspring

using OffspringSequence = std::variant<offspring::Explicit, offspring::PoissonFamily>;

/// Sum_{k >= first} k^(-a) for a > 1. Euler-Maclaurin tail from k = 2000 on;
/// the remainder is below 1e-14 for every a > 1.
double power_tail_sum(double a, std::int64_t first);

/// An INAR(infinity) model: immigration law of epsilon plus the offspring laws xi_k.
///
/// Construction checks only structural validity (parameter ranges); standing
/// assumptions such as subcriticality are reported by validate() and enforced
/// by the operations that need them.
class InarModel {
 public:
  InarModel(CountDistribution immigration, OffspringSequence offspring);

  const CountDistribution& immigration() const noexcept { return immigration_; }
  const OffspringSequence& offspring() const noexcept { return offspring_; }
  bool is_poisson_family() const noexcept;

  /// E[xi_k], k >= 1.
  double offspring_mean(std::int64_t k) const;
  /// Var[xi_k], k >= 1.
  double offspring_variance(std::int64_t k) const;
  CountDistribution offspring_law(std::int64_t k) const;
  /// log E[e^{x xi_k}].
  double offspring_log_mgf(std::int64_t k, double x) const;

  /// Sum_k log E[e^{x xi_k}] over all k (closed form for Poisson families).
  double offspring_log_mgf_sum(double x) const;
  /// d/dx of offspring_log_mgf_sum.
  double offspring_tilted_mean_sum(double x) const;

  /// Number of explicitly listed lags, or nullopt for an infinite family.
  std::optional<std::int64_t> finite_length() const;

  /// Sum_{k > K} E[xi_k].
  double mean_tail(std::int64_t K) const;

  /// effective_horizon(*this, kTruncationTol), cached.
  std::int64_t horizon() const noexcept { return horizon_; }
  /// E[xi_1..xi_count] (index 0 holds lag 1).
  std::vector<double> lag_means(std::int64_t count) const;
  /// Var[xi_1..xi_count].
  std::vector<double> lag_variances(std::int64_t count) const;

  /// Immigration and offspring all constant; the dynamics are deterministic.
  bool is_deterministic() const;

  bool operator==(const InarModel& other) const {
    return immigration_ == other.immigration_ && offspring_ == other.offspring_;
  }

 private:
  friend double offspring_mean_l1(const InarModel& m);
  friend double offspring_var_l1(const InarModel& m);

  CountDistribution immigration_;
  OffspringSequence offspring_;
  std::optional<double> mean_l1_;  // nullopt when the series diverges
  std::optional<double> var_l1_;
  std::int64_t horizon_ = 0;
};

/// ||E[xi]||_1. Throws DivergentSeries when the series diverges.
double offspring_mean_l1(const InarModel& m);
/// ||Var[xi]||_1. Throws DivergentSeries when the series diverges.
double offspring_var_l1(const InarModel& m);

/// Smallest K with Sum_{k > K} E[xi_k] < tol. Finite sequences return their
/// full length (their tail is exactly zero). Saturates for very slow power laws.
std::int64_t effective_horizon(const InarModel& m, double tol);

enum class Verdict { holds, fails, unknown };
std::string to_string(Verdict v);

struct AssumptionCheck {
  Verdict verdict = Verdict::unknown;
  std::optional<double> constant;  // witnessing constant (norm, C1, C2, E[eps])
  std::optional<double> exponent;  // witnessing exponent for (b2)
  std::string note;
};

struct AssumptionReport {
  AssumptionCheck a;
  AssumptionCheck b1;
  AssumptionCheck b2;
  AssumptionCheck c;
  bool holds(const std::string& item) const;
};

/// Checks items (a), (b1), (b2), (c) of the standing assumptions. Never throws.
AssumptionReport validate(const InarModel& m);

/// Throws AssumptionViolation unless (a) and (c) hold.
void require_lln_assumptions(const InarModel& m);

}  // namespace inar
