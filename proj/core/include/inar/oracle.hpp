#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>

#include "inar/model.hpp"

namespace inar {

/// Cap on the number of (window, partial sum) states the enumeration may visit.
inline constexpr std::uint64_t kOracleStateCap = 10'000'000;

/// Exact law of S_n: pmf[s] = P(S_n = s), zero-mass values omitted.
struct ExactLaw {
  std::map<std::int64_t, double> pmf;

  double total_mass() const;
};

/// Dynamic programming over (X_{t-K+1}, ..., X_t, S_t) with K the last lag
/// carrying offspring. Requires bounded immigration and offspring laws;
/// throws UnboundedSupport otherwise, and StateExplosion when the worst-case
/// state count exceeds kOracleStateCap (checked before any work is done).
ExactLaw enumerate_sn(const InarModel& m, std::int64_t n);

/// log sum_s exp(theta s) P(S_n = s).
double oracle_log_mgf(const InarModel& m, double theta, std::int64_t n);
double oracle_log_mgf(const ExactLaw& law, double theta);

struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
};
ExactMoments oracle_moments(const InarModel& m, std::int64_t n);
ExactMoments oracle_moments(const ExactLaw& law);

/// CSV "s,prob".
void write_exact_law_csv(std::ostream& os, const ExactLaw& law);

}  // namespace inar
