#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "inar/model.hpp"
#include "inar/random_stream.hpp"

namespace inar {

struct StreamDescriptor {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// A realized path X_1..X_n of the empty-history process.
struct Trajectory {
  std::vector<std::int64_t> counts;
  StreamDescriptor origin;
  std::uint64_t model_fingerprint = 0;

  std::int64_t total() const;
};

/// How the offspring sum over l = 1..X_{t-k} of xi_l^{(t,k)} is drawn.
enum class CompoundSampling {
  /// For Poisson families, one Poisson(sum_k alpha_k X_{t-k}) variate per
  /// step (exact by additivity); individual draws otherwise.
  additive,
  /// Always X_{t-k} individual draws of xi_k.
  individual,
};

struct SimulationOptions {
  CompoundSampling sampling = CompoundSampling::additive;
};

/// Simulates X_1..X_n from empty history. The lag sum is truncated at
/// m.horizon(). Subcriticality is not required on a finite horizon, but the
/// offspring norms must converge and (c) must hold (AssumptionViolation
/// otherwise). Throws CountOverflow if a count leaves the int64 range.
Trajectory simulate(const InarModel& m, std::int64_t n, RandomStream& rng,
                    const SimulationOptions& options = {});

struct MartingaleDiagnostic {
  /// M_i = sum_{j <= i} (X_j - E[X_j | X_1..X_{j-1}]).
  std::vector<double> m_path;
  /// n Var[eps] + ||Var[xi]||_1 n mu.
  double second_moment_bound = 0.0;
  double realized_m_squared = 0.0;
  /// The nonnegative remainder in M_n = (1 - ||E[xi]||_1) S_n - n E[eps] + remainder.
  double remainder = 0.0;
  /// |M_n - ((1 - ||E[xi]||_1) S_n - n E[eps] + remainder)|, rounding only.
  double identity_residual = 0.0;
};

/// Offspring norms inside the decomposition use the same truncated lag set as
/// simulate(). Throws FingerprintMismatch if t was not generated from m.
MartingaleDiagnostic martingale_diagnostic(const Trajectory& t, const InarModel& m);

struct ReplicationSummary {
  std::uint64_t rep = 0;
  std::int64_t s_n = 0;
  std::int64_t x_n = 0;
  double m_n = 0.0;
};

struct BatchOptions {
  SimulationOptions simulation;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// reps independent replications; replication r draws from stream (seed, r).
/// The result is ordered by rep and independent of the thread count.
std::vector<ReplicationSummary> simulate_batch(const InarModel& m, std::int64_t n, std::uint64_t reps,
                                               std::uint64_t seed, const BatchOptions& options = {});

/// CSV "t,x".
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
/// CSV "rep,s_n,x_n,m_n".
void write_batch_csv(std::ostream& os, const std::vector<ReplicationSummary>& rows);

}  // namespace inar
