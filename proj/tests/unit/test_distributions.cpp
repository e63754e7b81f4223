#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "inar/distributions.hpp"
#include "inar/random_stream.hpp"

using inar::CountDistribution;
using inar::RandomStream;

namespace {

std::vector<CountDistribution> catalog() {
  return {
      CountDistribution::constant(3),
      CountDistribution::constant(0),
      CountDistribution::bernoulli(0.4),
      CountDistribution::bernoulli(0.0),
      CountDistribution::binomial(5, 0.3),
      CountDistribution::poisson(1.5),
      CountDistribution::poisson(0.0),
      CountDistribution::poisson(25.0),
      CountDistribution::geometric(0.5),
      CountDistribution::geometric(0.8),
      CountDistribution::finite_support({0.25, 0.75}),
      CountDistribution::finite_support({0.1, 0.0, 0.6, 0.3}),
  };
}

bool bounded(const CountDistribution& d) { return d.max_support().has_value(); }

}  // namespace

TEST(Distributions, MeanExamples) {
  EXPECT_DOUBLE_EQ(CountDistribution::poisson(1.5).mean(), 1.5);
  EXPECT_DOUBLE_EQ(CountDistribution::bernoulli(0.4).mean(), 0.4);
  EXPECT_DOUBLE_EQ(CountDistribution::geometric(0.5).mean(), 1.0);
}

TEST(Distributions, VarianceExamples) {
  EXPECT_DOUBLE_EQ(CountDistribution::poisson(1.5).variance(), 1.5);
  EXPECT_NEAR(CountDistribution::bernoulli(0.4).variance(), 0.24, 1e-15);
  EXPECT_EQ(CountDistribution::constant(3).variance(), 0.0);
}

TEST(Distributions, LogMgfExamples) {
  EXPECT_NEAR(CountDistribution::poisson(0.5).log_mgf(std::log(2.0)), 0.5, 1e-15);
  EXPECT_EQ(CountDistribution::geometric(0.5).log_mgf(std::log(2.0)), std::numeric_limits<double>::infinity());
  for (const auto& d : catalog()) EXPECT_EQ(d.log_mgf(0.0), 0.0) << d.name();
}

TEST(Distributions, DomainSupremum) {
  EXPECT_EQ(CountDistribution::poisson(2.0).log_mgf_domain_sup(), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(CountDistribution::geometric(0.5).log_mgf_domain_sup(), std::log(2.0), 1e-15);
  EXPECT_EQ(CountDistribution::finite_support({0.5, 0.5}).log_mgf_domain_sup(),
            std::numeric_limits<double>::infinity());
}

TEST(Distributions, PmfExamples) {
  EXPECT_DOUBLE_EQ(CountDistribution::bernoulli(0.4).pmf(1), 0.4);
  EXPECT_NEAR(CountDistribution::poisson(1.0).pmf(0), std::exp(-1.0), 1e-16);
  EXPECT_EQ(CountDistribution::finite_support({0.25, 0.75}).pmf(5), 0.0);
  EXPECT_NEAR(CountDistribution::binomial(5, 0.3).pmf(2), 10 * 0.09 * 0.343, 1e-15);
  EXPECT_NEAR(CountDistribution::geometric(0.5).pmf(3), 0.0625, 1e-16);
}

TEST(Distributions, RejectsInvalidParameters) {
  EXPECT_THROW(CountDistribution::bernoulli(1.5), std::invalid_argument);
  EXPECT_THROW(CountDistribution::constant(-1), std::invalid_argument);
  EXPECT_THROW(CountDistribution::poisson(-0.1), std::invalid_argument);
  EXPECT_THROW(CountDistribution::geometric(0.0), std::invalid_argument);
  EXPECT_THROW(CountDistribution::binomial(0, 0.5), std::invalid_argument);
  EXPECT_THROW(CountDistribution::finite_support({0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(CountDistribution::finite_support({}), std::invalid_argument);
}

TEST(DistributionProperties, FiniteDifferenceMomentsAtZero) {
  const double h = 1e-5;
  for (const auto& d : catalog()) {
    const double up = d.log_mgf(h);
    const double down = d.log_mgf(-h);
    const double first = (up - down) / (2 * h);
    const double second = (up - 2 * d.log_mgf(0.0) + down) / (h * h);
    EXPECT_NEAR(first, d.mean(), 1e-6) << d.name();
    EXPECT_NEAR(second, d.variance(), 1e-4) << d.name();
  }
}

TEST(DistributionProperties, TiltedMeanMatchesDerivative) {
  const double h = 1e-6;
  for (const auto& d : catalog()) {
    for (double t : {-2.0, -0.5, 0.3}) {
      if (t + h >= d.log_mgf_domain_sup()) continue;
      const double fd = (d.log_mgf(t + h) - d.log_mgf(t - h)) / (2 * h);
      EXPECT_NEAR(d.tilted_mean(t), fd, 1e-6 * std::max(1.0, std::fabs(fd))) << d.name() << " t=" << t;
    }
  }
}

TEST(DistributionProperties, LogMgfIsConvex) {
  const std::vector<double> grid{-3.0, -1.0, -0.2, 0.0, 0.1, 0.5, 1.0, 2.0};
  for (const auto& d : catalog()) {
    for (double t1 : grid) {
      for (double t2 : grid) {
        if (!(t1 < t2) || t2 >= d.log_mgf_domain_sup()) continue;
        for (double lam : {0.1, 0.5, 0.9}) {
          const double lhs = d.log_mgf(lam * t1 + (1 - lam) * t2);
          const double rhs = lam * d.log_mgf(t1) + (1 - lam) * d.log_mgf(t2);
          EXPECT_LE(lhs, rhs + 1e-12) << d.name();
        }
      }
    }
  }
}

TEST(DistributionProperties, BoundedSupportPmfAndMgf) {
  for (const auto& d : catalog()) {
    if (!bounded(d)) continue;
    const auto top = *d.max_support();
    double mass = 0.0;
    for (std::int64_t k = 0; k <= top; ++k) mass += d.pmf(k);
    EXPECT_NEAR(mass, 1.0, 1e-12) << d.name();
    for (double t : {-1.5, -0.3, 0.4, 1.1}) {
      double mgf = 0.0;
      for (std::int64_t k = 0; k <= top; ++k) mgf += std::exp(t * static_cast<double>(k)) * d.pmf(k);
      const double expected = std::exp(d.log_mgf(t));
      EXPECT_NEAR(mgf / expected, 1.0, 1e-10) << d.name() << " t=" << t;
    }
  }
}

TEST(DistributionProperties, UnboundedPmfSumsToOne) {
  for (const auto& d : {CountDistribution::poisson(1.5), CountDistribution::poisson(25.0),
                        CountDistribution::geometric(0.5)}) {
    double mass = 0.0;
    for (std::int64_t k = 0; k < 400; ++k) mass += d.pmf(k);
    EXPECT_NEAR(mass, 1.0, 1e-12) << d.name();
  }
}

TEST(Sampling, DegenerateLaws) {
  RandomStream rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(CountDistribution::constant(3).sample(rng), 3);
    EXPECT_EQ(CountDistribution::bernoulli(0.0).sample(rng), 0);
    EXPECT_EQ(CountDistribution::poisson(0.0).sample(rng), 0);
  }
}

TEST(Sampling, ReproducibleForIdenticalStreamState) {
  for (const auto& d : catalog()) {
    RandomStream a(99, 4);
    RandomStream b(99, 4);
    for (int i = 0; i < 200; ++i) ASSERT_EQ(d.sample(a), d.sample(b)) << d.name();
  }
}

TEST(Sampling, PoissonMeanOverMillionDraws) {
  RandomStream rng(2024);
  const auto d = CountDistribution::poisson(4.0);
  double sum = 0.0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) sum += static_cast<double>(d.sample(rng));
  EXPECT_NEAR(sum / draws, 4.0, 0.01);
}

// Empirical frequencies against the pmf, each cell within 5 binomial standard errors.
TEST(Sampling, EmpiricalPmfMatches) {
  const int draws = 200'000;
  for (const auto& d : catalog()) {
    RandomStream rng(7, 1);
    std::vector<int> counts(200, 0);
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const auto v = d.sample(rng);
      ASSERT_GE(v, 0);
      if (v < 200) ++counts[static_cast<std::size_t>(v)];
      sum += static_cast<double>(v);
      sq += static_cast<double>(v) * static_cast<double>(v);
    }
    for (std::int64_t k = 0; k < 200; ++k) {
      const double p = d.pmf(k);
      const double se = std::sqrt(p * (1 - p) / draws);
      EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / static_cast<double>(draws), p, 5 * se + 3.0 / draws)
          << d.name() << " k=" << k;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    EXPECT_NEAR(mean, d.mean(), 5 * std::sqrt(d.variance() / draws) + 1e-12) << d.name();
    EXPECT_NEAR(var, d.variance(), 0.05 * d.variance() + 1e-12) << d.name();
  }
}

TEST(Sampling, PoissonRejectionBranch) {
  for (double lambda : {10.5, 37.0, 400.0}) {
    RandomStream rng(11, static_cast<std::uint64_t>(lambda));
    const int draws = 200'000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double v = static_cast<double>(inar::sample_poisson(lambda, rng));
      sum += v;
      sq += v * v;
    }
    const double mean = sum / draws;
    EXPECT_NEAR(mean, lambda, 5 * std::sqrt(lambda / draws));
    EXPECT_NEAR(sq / draws - mean * mean, lambda, 0.03 * lambda);
  }
}

TEST(RandomStreams, DistinctStreamsDiffer) {
  RandomStream a(5, 0);
  RandomStream b(5, 1);
  RandomStream c(6, 0);
  const auto va = a.next_u64();
  EXPECT_NE(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
  EXPECT_EQ(a.substream(1).next_u64(), RandomStream(5, 1).next_u64());
}

TEST(RandomStreams, UniformIsOpenInterval) {
  RandomStream rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
