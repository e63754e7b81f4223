#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "inar/random_stream.hpp"

namespace inar {

namespace dist {
struct Constant {
  std::int64_t value;
  bool operator==(const Constant&) const = default;
};
struct Bernoulli {
  double p;
  bool operator==(const Bernoulli&) const = default;
};
struct Binomial {
  std::int64_t trials;
  double p;
  bool operator==(const Binomial&) const = default;
};
struct Poisson {
  double lambda;
  bool operator==(const Poisson&) const = default;
};
/// Failures before the first success: P(k) = (1-p)^k p, k = 0, 1, ...
struct Geometric {
  double p;
  bool operator==(const Geometric&) const = default;
};
/// probs[k] = P(X = k) for k = 0..probs.size()-1.
struct FiniteSupport {
  std::vector<double> probs;
  bool operator==(const FiniteSupport&) const = default;
};
}  // namespace dist

/// A law on {0, 1, 2, ...} with closed-form moments, log-MGF, pmf and a sampler.
///
/// Instances are only created through the named constructors, which validate
/// parameters and throw std::invalid_argument on bad input; every instance is
/// therefore valid by construction.
class CountDistribution {
 public:
  using Variant = std::variant<dist::Constant, dist::Bernoulli, dist::Binomial, dist::Poisson,
                               dist::Geometric, dist::FiniteSupport>;

  static CountDistribution constant(std::int64_t value);
  static CountDistribution bernoulli(double p);
  static CountDistribution binomial(std::int64_t trials, double p);
  static CountDistribution poisson(double lambda);
  static CountDistribution geometric(double p);
  static CountDistribution finite_support(std::vector<double> probs);

  const Variant& params() const noexcept { return params_; }
  std::string name() const;

  double mean() const;
  double variance() const;

  /// log E[e^{tX}]; +inf once t reaches the end of the finite domain.
  double log_mgf(double t) const;
  /// d/dt log E[e^{tX}], the mean of the exponentially tilted law. +inf off-domain.
  double tilted_mean(double t) const;
  /// sup{t : log_mgf(t) < inf}.
  double log_mgf_domain_sup() const;

  double pmf(std::int64_t k) const;
  /// Largest value with positive mass, or nullopt for unbounded support.
  std::optional<std::int64_t> max_support() const;
  bool is_degenerate() const;

  std::int64_t sample(RandomStream& rng) const;

  bool operator==(const CountDistribution&) const = default;

 private:
  explicit CountDistribution(Variant v) : params_(std::move(v)) {}
  Variant params_;
};

/// Poisson variate: sequential-search inversion for small means, PTRS
/// transformed rejection above the cutover.
std::int64_t sample_poisson(double lambda, RandomStream& rng);

}  // namespace inar
