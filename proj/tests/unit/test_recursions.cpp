#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "inar/asymptotics.hpp"
#include "inar/errors.hpp"
#include "inar/oracle.hpp"
#include "inar/recursions.hpp"
#include "reference_models.hpp"

using namespace inar;
using inar::testing::explicit_model;
using inar::testing::hawkes_h1;
using inar::testing::iid;
using inar::testing::inar1_b1;

TEST(FSequence, ZeroTilt) {
  for (const auto& m : {hawkes_h1(), inar1_b1()}) {
    const auto r = f_sequence(m, 0.0, 50);
    ASSERT_EQ(r.f_values.size(), 50u);
    for (double f : r.f_values) EXPECT_EQ(f, 0.0);
    EXPECT_EQ(r.log_mgf_total, 0.0);
    EXPECT_FALSE(r.diverged());
  }
}

TEST(FSequence, HandRecursionForInar1) {
  const auto r = f_sequence(inar1_b1(), std::log(2.0), 2);
  ASSERT_EQ(r.f_values.size(), 2u);
  EXPECT_NEAR(r.f_values[0], std::log(2.0), 1e-15);
  EXPECT_NEAR(r.f_values[1], std::log(2.8), 1e-15);
  EXPECT_NEAR(r.log_mgf_total, std::log(2.85), 1e-15);
}

TEST(FSequence, NoOffspringKeepsTilt) {
  const auto r = f_sequence(iid(CountDistribution::poisson(1.0)), 0.7, 20);
  for (double f : r.f_values) EXPECT_EQ(f, 0.7);
}

TEST(LogMgfExact, Examples) {
  EXPECT_EQ(log_mgf_exact(hawkes_h1(), 0.0, 1000), 0.0);
  EXPECT_NEAR(log_mgf_exact(inar1_b1(), std::log(2.0), 2), std::log(2.85), 1e-15);
  EXPECT_NEAR(log_mgf_exact(iid(CountDistribution::poisson(1.0)), 1.0, 10), 10.0 * (std::exp(1.0) - 1.0), 1e-12);
}

TEST(LogMgfExact, DivergenceIsReported) {
  // Geometric offspring: the tilt grows past log(1/(1-p)) and the MGF blows up.
  const auto m = explicit_model(CountDistribution::poisson(1.0), {CountDistribution::geometric(0.6)});
  const auto r = f_sequence(m, 0.5, 1000);
  EXPECT_TRUE(r.diverged());
  EXPECT_LT(r.f_values.size(), 1000u);
  EXPECT_EQ(log_mgf_exact(m, 0.5, 1000), std::numeric_limits<double>::infinity());
}

TEST(FSequenceProperties, MonotoneAndConvergent) {
  for (const auto& m : {hawkes_h1(), inar1_b1()}) {
    const auto tc = theta_c(m).value;
    for (double theta : {0.05, 0.5 * tc, tc - 0.05}) {
      const auto r = f_sequence(m, theta, 100000);
      ASSERT_FALSE(r.diverged());
      for (std::size_t k = 1; k < r.f_values.size(); ++k) ASSERT_GE(r.f_values[k], r.f_values[k - 1]);
      EXPECT_NEAR(r.f_values.back(), f_infinity(m, theta), 1e-6) << theta;
    }
    const auto neg = f_sequence(m, -0.5, 1000);
    for (std::size_t k = 1; k < neg.f_values.size(); ++k) ASSERT_LE(neg.f_values[k], neg.f_values[k - 1]);
    EXPECT_NEAR(neg.f_values.back(), f_infinity(m, -0.5), 1e-9);
  }
}

TEST(FSequenceProperties, MatchesEnumeration) {
  const std::vector<InarModel> models{
      inar1_b1(),
      explicit_model(CountDistribution::binomial(2, 0.3), {CountDistribution::bernoulli(0.2), CountDistribution::bernoulli(0.3)}),
      explicit_model(CountDistribution::finite_support({0.5, 0.2, 0.3}), {CountDistribution::binomial(2, 0.15)}),
  };
  for (const auto& m : models) {
    for (std::int64_t n = 1; n <= 5; ++n) {
      for (double theta : {-1.0, -0.3, 0.0, 0.4, std::log(2.0)}) {
        EXPECT_NEAR(log_mgf_exact(m, theta, n), oracle_log_mgf(m, theta, n), 1e-10) << n << " " << theta;
      }
    }
  }
}

TEST(Gbar, Inar1HandValues) {
  const auto t = gbar_tables(inar1_b1(), 3);
  EXPECT_NEAR(t.g1[0], 1.0, 1e-15);
  EXPECT_NEAR(t.g1[1], 1.4, 1e-15);
  EXPECT_NEAR(t.g1[2], 1.56, 1e-15);
  EXPECT_EQ(t.g2[0], 0.0);
  EXPECT_NEAR(t.g2[1], 0.12, 1e-15);
  EXPECT_NEAR(t.g2[2], 0.2832, 1e-15);
  EXPECT_NEAR(t.g1_bound, 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(t.sum_g1[2], 3.96, 1e-14);
}

TEST(Gbar, ClosedFormForInar1) {
  const auto t = gbar_tables(inar1_b1(), 200);
  for (std::size_t k = 0; k < t.g1.size(); ++k) {
    EXPECT_NEAR(t.g1[k], (1.0 - std::pow(0.4, static_cast<double>(k + 1))) / 0.6, 1e-13);
  }
}

TEST(Gbar, LemmaBoundsOnSeveralModels) {
  const std::vector<InarModel> models{
      hawkes_h1(),
      inar1_b1(),
      InarModel(CountDistribution::poisson(2.0), offspring::PoissonFamily{decay::PowerLaw{0.3, 2.5}}),
      InarModel(CountDistribution::poisson(1.0), offspring::PoissonFamily{decay::Geometric{0.09, 0.9}}),
      explicit_model(CountDistribution::bernoulli(0.5), {CountDistribution::binomial(3, 0.1), CountDistribution::geometric(0.8)}),
  };
  for (const auto& m : models) {
    const auto t = gbar_tables(m, 20000);
    for (std::size_t k = 0; k < t.g1.size(); ++k) {
      ASSERT_LE(t.g1[k], t.g1_bound);
      ASSERT_LE(t.g2[k], t.g2_bound);
      ASSERT_GE(t.g2[k], 0.0);
      if (k > 0) {
        ASSERT_GE(t.g1[k], t.g1[k - 1]);
      }
    }
  }
}

TEST(Gbar, RequiresSubcriticality) {
  EXPECT_THROW(gbar_tables(explicit_model(CountDistribution::poisson(1.0), {CountDistribution::poisson(1.0)}), 10),
               AssumptionViolation);
}

TEST(Cesaro, Limits) {
  const auto b = cesaro_check(inar1_b1(), 10);
  EXPECT_NEAR(b.g1.limit, 5.0 / 3.0, 1e-14);
  EXPECT_NEAR(b.g1_squared.limit, 25.0 / 9.0, 1e-14);
  EXPECT_NEAR(b.g2.limit, 5.0 / 9.0, 1e-14);
  const auto h = cesaro_check(hawkes_h1(), 10);
  EXPECT_NEAR(h.g1.limit, 2.0, 1e-14);
  EXPECT_NEAR(h.g1_squared.limit, 4.0, 1e-14);
  EXPECT_NEAR(h.g2.limit, 2.0, 1e-14);
}

TEST(Cesaro, NoOffspringIsExact) {
  for (std::int64_t n : {1, 7, 1000}) {
    const auto c = cesaro_check(iid(CountDistribution::poisson(1.0)), n);
    EXPECT_EQ(c.g1.empirical, 1.0);
    EXPECT_EQ(c.g1_squared.empirical, 1.0);
    EXPECT_EQ(c.g2.empirical, 0.0);
    EXPECT_EQ(c.g2.limit, 0.0);
    EXPECT_EQ(c.g2.relative_error(), 0.0);
  }
}

TEST(Cesaro, ConvergesAtLargeN) {
  for (const auto& m : {hawkes_h1(), inar1_b1()}) {
    const auto c = cesaro_check(m, 100000);
    EXPECT_LT(c.g1.relative_error(), 1e-3);
    EXPECT_LT(c.g1_squared.relative_error(), 1e-3);
    EXPECT_LT(c.g2.relative_error(), 1e-3);
  }
}

TEST(MdpCurve, ScheduleValidation) {
  EXPECT_THROW(MdpSchedule(0.5, {100}), std::invalid_argument);
  EXPECT_THROW(MdpSchedule(1.0, {100}), std::invalid_argument);
  EXPECT_THROW(MdpSchedule(0.7, {1}), std::invalid_argument);
  EXPECT_NEAR(MdpSchedule(0.75, {10000}).speed(10000), 1000.0, 1e-9);
}

TEST(MdpCurve, ZeroTilt) {
  for (const auto& p : mdp_mgf_curve(hawkes_h1(), 0.0, MdpSchedule(0.75, {100, 1000}))) {
    ASSERT_TRUE(p.value.has_value());
    EXPECT_EQ(*p.value, 0.0);
  }
}

TEST(MdpCurve, Limits) {
  EXPECT_NEAR(mdp_mgf_limit(hawkes_h1(), 1.0), 4.0, 1e-12);
  EXPECT_NEAR(mdp_mgf_limit(inar1_b1(), 1.0), 0.625, 1e-12);
}

TEST(MdpCurve, Inar1ApproachesLimit) {
  const auto curve = mdp_mgf_curve(inar1_b1(), 1.0, MdpSchedule(0.75, {1000, 10000, 100000}));
  double prev = 1e300;
  for (const auto& p : curve) {
    ASSERT_TRUE(p.value.has_value());
    const double err = std::fabs(*p.value - 0.625);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev / 0.625, 0.05);
}

TEST(MdpCurve, DivergentPointsAreFlagged) {
  // Geometric offspring with a small domain: at small n the tilt c(n) theta / n is too large.
  const auto m = explicit_model(CountDistribution::poisson(1.0), {CountDistribution::geometric(0.7)});
  const auto curve = mdp_mgf_curve(m, 5.0, MdpSchedule(0.6, {2, 100000}));
  EXPECT_FALSE(curve[0].value.has_value());
  EXPECT_TRUE(curve[1].value.has_value());
  std::ostringstream os;
  write_mdp_curve_csv(os, curve, mdp_mgf_limit(m, 5.0));
  EXPECT_NE(os.str().find("2,inf,"), std::string::npos);
}

TEST(CsvOutput, FSequenceAndGbar) {
  std::ostringstream f;
  write_f_sequence_csv(f, f_sequence(iid(CountDistribution::poisson(1.0)), 0.5, 2));
  EXPECT_EQ(f.str().substr(0, 4), "k,f\n");
  std::ostringstream g;
  write_gbar_csv(g, gbar_tables(inar1_b1(), 2));
  std::istringstream in(g.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,g1,g2");
  std::getline(in, line);
  EXPECT_EQ(line, "1,1,0");
  double g1 = 0.0;
  double g2 = 0.0;
  char comma = 0;
  int k = 0;
  in >> k >> comma >> g1 >> comma >> g2;
  EXPECT_EQ(k, 2);
  EXPECT_NEAR(g1, 1.4, 1e-15);
  EXPECT_NEAR(g2, 0.12, 1e-15);
}
