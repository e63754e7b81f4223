#include <gtest/gtest.h>

#include <cmath>

#include "inar/errors.hpp"
#include "inar/json_io.hpp"
#include "inar/model.hpp"
#include "reference_models.hpp"

using namespace inar;
using inar::testing::explicit_model;
using inar::testing::hawkes_h1;
using inar::testing::inar1_b1;

namespace {

InarModel poisson_family(DecayLaw law, double lambda = 1.0) {
  return InarModel(CountDistribution::poisson(lambda), offspring::PoissonFamily{std::move(law)});
}

// Independent oracle for sum_{k >= 1} c k^-a: direct sum to N plus the
// Euler-Maclaurin tail integral_N^inf - f(N)/2 - f'(N)/12.
double power_series_oracle(double c, double a, int N) {
  double s = 0.0;
  for (int k = N; k >= 1; --k) s += std::pow(static_cast<double>(k), -a);
  const double n = static_cast<double>(N);
  const double tail = std::pow(n, 1.0 - a) / (a - 1.0) - 0.5 * std::pow(n, -a) + a * std::pow(n, -a - 1.0) / 12.0;
  return c * (s + tail);
}

}  // namespace

TEST(ModelNorms, MeanExamples) {
  EXPECT_NEAR(offspring_mean_l1(hawkes_h1()), 0.5, 1e-15);
  EXPECT_NEAR(offspring_mean_l1(inar1_b1()), 0.4, 1e-15);
  EXPECT_EQ(offspring_mean_l1(explicit_model(CountDistribution::poisson(1.0), {})), 0.0);
}

TEST(ModelNorms, VarianceExamples) {
  EXPECT_NEAR(offspring_var_l1(hawkes_h1()), 0.5, 1e-15);
  EXPECT_NEAR(offspring_var_l1(inar1_b1()), 0.24, 1e-15);
  EXPECT_EQ(offspring_var_l1(explicit_model(CountDistribution::poisson(1.0), {CountDistribution::constant(0)})), 0.0);
}

TEST(ModelNorms, DivergentPowerLaw) {
  const auto m = poisson_family(decay::PowerLaw{0.1, 1.0});
  EXPECT_THROW(offspring_mean_l1(m), DivergentSeries);
  EXPECT_THROW(offspring_var_l1(m), DivergentSeries);
  EXPECT_EQ(validate(m).a.verdict, Verdict::fails);
}

TEST(ModelNorms, AgreeWithDirectSummation) {
  for (const auto& law : std::vector<DecayLaw>{decay::Geometric{0.25, 0.5}, decay::Geometric{0.3, 0.9},
                                               decay::FiniteList{{0.3, 0.2, 0.0, 0.1}}}) {
    const auto m = poisson_family(law);
    double s = 0.0;
    for (int k = 100000; k >= 1; --k) s += m.offspring_mean(k);
    EXPECT_NEAR(offspring_mean_l1(m), s, 1e-10);
    EXPECT_NEAR(offspring_var_l1(m), s, 1e-10);
  }
  for (double a : {3.0, 4.5}) {
    const auto m = poisson_family(decay::PowerLaw{0.2, a});
    double s = 0.0;
    for (int k = 100000; k >= 1; --k) s += m.offspring_mean(k);
    EXPECT_NEAR(offspring_mean_l1(m), s, 1e-10) << a;
  }
}

TEST(ModelNorms, SlowPowerLawAgainstTailCorrectedOracle) {
  for (double a : {1.2, 1.5, 2.0, 3.0}) {
    const auto m = poisson_family(decay::PowerLaw{0.1, a});
    EXPECT_NEAR(offspring_mean_l1(m), power_series_oracle(0.1, a, 100000), 1e-10) << a;
  }
  EXPECT_NEAR(power_tail_sum(2.0, 1), M_PI * M_PI / 6.0, 1e-13);
}

TEST(ModelValidate, HawkesAllHold) {
  const auto r = validate(hawkes_h1());
  for (const char* item : {"a", "b1", "b2", "c"}) EXPECT_TRUE(r.holds(item)) << item;
  EXPECT_NEAR(*r.a.constant, 0.5, 1e-15);
}

TEST(ModelValidate, SlowPowerLawFailsB1) {
  const auto r = validate(poisson_family(decay::PowerLaw{0.1, 1.2}));
  EXPECT_TRUE(r.holds("a"));
  EXPECT_EQ(r.b1.verdict, Verdict::fails);
  EXPECT_EQ(r.b2.verdict, Verdict::fails);
}

TEST(ModelValidate, ExplicitAllHold) {
  const auto r = validate(inar1_b1());
  for (const char* item : {"a", "b1", "b2", "c"}) EXPECT_TRUE(r.holds(item)) << item;
}

TEST(ModelValidate, SupercriticalFailsA) {
  const auto m = explicit_model(CountDistribution::poisson(1.0), {CountDistribution::poisson(1.2)});
  EXPECT_EQ(validate(m).a.verdict, Verdict::fails);
  try {
    require_lln_assumptions(m);
    FAIL() << "expected AssumptionViolation";
  } catch (const AssumptionViolation& e) {
    EXPECT_EQ(e.item(), "a");
  }
}

TEST(ModelValidate, B2ImpliesB1) {
  const std::vector<InarModel> models{
      hawkes_h1(),
      inar1_b1(),
      poisson_family(decay::PowerLaw{0.1, 1.2}),
      poisson_family(decay::PowerLaw{0.1, 1.5}),
      poisson_family(decay::PowerLaw{0.1, 1.6}),
      poisson_family(decay::PowerLaw{0.3, 2.5}),
      poisson_family(decay::FiniteList{{0.2, 0.1}}),
  };
  for (const auto& m : models) {
    const auto r = validate(m);
    if (r.b2.verdict == Verdict::holds) {
      EXPECT_EQ(r.b1.verdict, Verdict::holds);
      ASSERT_TRUE(r.b2.exponent.has_value());
      EXPECT_GT(*r.b2.exponent, 1.5);
    }
  }
}

TEST(EffectiveHorizon, Examples) {
  EXPECT_EQ(effective_horizon(hawkes_h1(), 1e-12), 39);
  EXPECT_EQ(hawkes_h1().horizon(), 39);
  EXPECT_EQ(effective_horizon(poisson_family(decay::FiniteList{{0.3, 0.2}}), 1e-3), 2);
  EXPECT_EQ(effective_horizon(inar1_b1(), 0.5), 1);
}

TEST(EffectiveHorizon, TailBelowTolerance) {
  for (const auto& law : std::vector<DecayLaw>{decay::Geometric{0.25, 0.5}, decay::Geometric{0.5, 0.9},
                                               decay::PowerLaw{0.3, 3.0}}) {
    const auto m = poisson_family(law);
    for (double tol : {1e-3, 1e-8, 1e-12}) {
      const auto K = effective_horizon(m, tol);
      EXPECT_LT(m.mean_tail(K), tol);
    }
  }
  const auto g = poisson_family(decay::Geometric{0.25, 0.5});
  EXPECT_GE(g.mean_tail(38), 1e-12);
}

TEST(ModelJson, RoundTrip) {
  const std::vector<InarModel> models{hawkes_h1(), inar1_b1(), poisson_family(decay::PowerLaw{0.1, 2.5}),
                                      explicit_model(CountDistribution::finite_support({0.2, 0.8}),
                                                     {CountDistribution::binomial(3, 0.1), CountDistribution::geometric(0.9)})};
  for (const auto& m : models) {
    const auto j = to_json(m);
    const auto back = model_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_TRUE(back == m) << j.dump();
    EXPECT_EQ(model_fingerprint(back), model_fingerprint(m));
  }
  EXPECT_NE(model_fingerprint(hawkes_h1()), model_fingerprint(inar1_b1()));
}

TEST(ModelJson, RejectsUnknownAndMissingKeys) {
  auto j = to_json(hawkes_h1());
  j["extra"] = 1;
  EXPECT_THROW(model_from_json(j), ConfigError);
  auto k = to_json(hawkes_h1());
  k["immigration"].erase("lambda");
  EXPECT_THROW(model_from_json(k), ConfigError);
  auto bad = to_json(hawkes_h1());
  bad["immigration"]["lambda"] = -1.0;
  EXPECT_THROW(model_from_json(bad), ConfigError);
  EXPECT_THROW(distribution_from_json(nlohmann::json{{"type", "cauchy"}}), ConfigError);
}

TEST(ModelJson, SpecSchema) {
  const auto j = nlohmann::json::parse(
      R"({"immigration":{"type":"poisson","lambda":0.5},)"
      R"("offspring":{"type":"poisson_family","decay":{"type":"geometric","c":0.25,"r":0.5}}})");
  const auto m = model_from_json(j);
  EXPECT_DOUBLE_EQ(m.immigration().mean(), 0.5);
  EXPECT_TRUE(m.is_poisson_family());
}
