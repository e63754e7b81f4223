#include "inar/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "inar/errors.hpp"
#include "inar/json_io.hpp"

namespace inar {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw CountOverflow("count exceeds the int64 range");
  return out;
}

// Per-call sampling plan shared by every time step.
struct Plan {
  std::int64_t lags = 0;
  bool poisson = false;
  std::vector<double> means;               // alpha_k for the Poisson shortcut
  std::vector<CountDistribution> laws;     // xi_k for individual draws
};

Plan make_plan(const InarModel& m, std::int64_t n, const SimulationOptions& options) {
  Plan plan;
  plan.lags = std::min<std::int64_t>(n - 1, m.horizon());
  plan.poisson = m.is_poisson_family() && options.sampling == CompoundSampling::additive;
  if (plan.poisson) {
    plan.means = m.lag_means(plan.lags);
  } else {
    plan.laws.reserve(static_cast<std::size_t>(std::max<std::int64_t>(plan.lags, 0)));
    for (std::int64_t k = 1; k <= plan.lags; ++k) plan.laws.push_back(m.offspring_law(k));
  }
  return plan;
}

void run(const InarModel& m, const Plan& plan, std::vector<std::int64_t>& x, RandomStream& rng) {
  const auto n = static_cast<std::int64_t>(x.size());
  for (std::int64_t t = 0; t < n; ++t) {
    std::int64_t value = m.immigration().sample(rng);
    const std::int64_t lags = std::min(t, plan.lags);
    if (plan.poisson) {
      // Independent Poisson offspring sums over all lags add up to one Poisson variate.
      double lambda = 0.0;
      for (std::int64_t k = 1; k <= lags; ++k) {
        lambda += plan.means[static_cast<std::size_t>(k - 1)] * static_cast<double>(x[static_cast<std::size_t>(t - k)]);
      }
      if (!(lambda < 9.0e18)) throw CountOverflow("offspring intensity exceeds the int64 range");
      if (lambda > 0.0) value = checked_add(value, sample_poisson(lambda, rng));
    } else {
      for (std::int64_t k = 1; k <= lags; ++k) {
        const std::int64_t parents = x[static_cast<std::size_t>(t - k)];
        const auto& law = plan.laws[static_cast<std::size_t>(k - 1)];
        if (law.variance() == 0.0) {
          std::int64_t each = std::llround(law.mean());
          std::int64_t sum = 0;
          if (__builtin_mul_overflow(each, parents, &sum)) throw CountOverflow("count exceeds the int64 range");
          value = checked_add(value, sum);
          continue;
        }
        for (std::int64_t l = 0; l < parents; ++l) value = checked_add(value, law.sample(rng));
      }
    }
    x[static_cast<std::size_t>(t)] = value;
  }
}

// M_n using lags 1..min(i-1, lags) for the conditional means.
double terminal_martingale(const std::vector<std::int64_t>& x, const std::vector<double>& means, double eeps) {
  long double mn = 0.0L;
  const auto n = static_cast<std::int64_t>(x.size());
  const auto lags = static_cast<std::int64_t>(means.size());
  for (std::int64_t i = 0; i < n; ++i) {
    long double cond = eeps;
    const std::int64_t upto = std::min(i, lags);
    for (std::int64_t k = 1; k <= upto; ++k) {
      cond += static_cast<long double>(means[static_cast<std::size_t>(k - 1)]) *
              static_cast<long double>(x[static_cast<std::size_t>(i - k)]);
    }
    mn += static_cast<long double>(x[static_cast<std::size_t>(i)]) - cond;
  }
  return static_cast<double>(mn);
}

// Finite-horizon dynamics only need convergent offspring norms and finite immigration moments.
void require_simulable(const InarModel& m) {
  const auto r = validate(m);
  if (r.c.verdict != Verdict::holds) throw AssumptionViolation("c", "Assumption (c) violated: " + r.c.note);
  try {
    offspring_mean_l1(m);
  } catch (const DivergentSeries& e) {
    throw AssumptionViolation("a", std::string("Assumption (a) violated: ") + e.what());
  }
}

}  // namespace

std::int64_t Trajectory::total() const {
  std::int64_t s = 0;
  for (auto v : counts) s = checked_add(s, v);
  return s;
}

Trajectory simulate(const InarModel& m, std::int64_t n, RandomStream& rng, const SimulationOptions& options) {
  if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
  require_simulable(m);
  Trajectory t;
  t.origin = {std::string(rng.algorithm()), rng.seed(), rng.stream()};
  t.model_fingerprint = model_fingerprint(m);
  t.counts.assign(static_cast<std::size_t>(n), 0);
  run(m, make_plan(m, n, options), t.counts, rng);
  return t;
}

MartingaleDiagnostic martingale_diagnostic(const Trajectory& t, const InarModel& m) {
  if (t.model_fingerprint != model_fingerprint(m)) {
    throw FingerprintMismatch("trajectory was generated from a different model (fingerprint " +
                              fingerprint_hex(t.model_fingerprint) + " vs " +
                              fingerprint_hex(model_fingerprint(m)) + ")");
  }
  const auto& x = t.counts;
  const auto n = static_cast<std::int64_t>(x.size());
  const std::int64_t lags = std::min<std::int64_t>(n - 1, m.horizon());
  const auto means = m.lag_means(std::max<std::int64_t>(lags, 0));
  const double eeps = m.immigration().mean();

  MartingaleDiagnostic d;
  d.m_path.resize(x.size());
  long double running = 0.0L;
  long double s = 0.0L;
  for (std::int64_t i = 0; i < n; ++i) {
    long double cond = eeps;
    const std::int64_t upto = std::min(i, lags);
    for (std::int64_t k = 1; k <= upto; ++k) {
      cond += static_cast<long double>(means[static_cast<std::size_t>(k - 1)]) *
              static_cast<long double>(x[static_cast<std::size_t>(i - k)]);
    }
    running += static_cast<long double>(x[static_cast<std::size_t>(i)]) - cond;
    s += static_cast<long double>(x[static_cast<std::size_t>(i)]);
    d.m_path[static_cast<std::size_t>(i)] = static_cast<double>(running);
  }

  // suffix[j] = sum_{k >= j} a_k over the truncated lag set, j = 1..lags+1.
  std::vector<long double> suffix(static_cast<std::size_t>(lags) + 2, 0.0L);
  for (std::int64_t j = lags; j >= 1; --j) {
    suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j + 1)] + means[static_cast<std::size_t>(j - 1)];
  }
  const long double norm = suffix.size() > 1 ? suffix[1] : 0.0L;
  long double remainder = norm * static_cast<long double>(x.back());
  // X_i (1-based) carries the lags k >= n - i + 1 that fall past the horizon.
  for (std::int64_t i = 1; i <= n - 1; ++i) {
    const std::int64_t j = n - i + 1;
    if (j <= lags) remainder += suffix[static_cast<std::size_t>(j)] * static_cast<long double>(x[static_cast<std::size_t>(i - 1)]);
  }
  const long double rhs = (1.0L - norm) * s - static_cast<long double>(n) * eeps + remainder;

  const double mbar = offspring_mean_l1(m);
  const double vnorm = offspring_var_l1(m);
  const double mu = mbar < 1.0 ? eeps / (1.0 - mbar) : std::numeric_limits<double>::infinity();
  d.second_moment_bound = static_cast<double>(n) * m.immigration().variance();
  if (vnorm > 0.0) d.second_moment_bound += vnorm * static_cast<double>(n) * mu;
  d.realized_m_squared = d.m_path.back() * d.m_path.back();
  d.remainder = static_cast<double>(remainder);
  d.identity_residual = static_cast<double>(std::fabs(running - rhs));
  return d;
}

std::vector<ReplicationSummary> simulate_batch(const InarModel& m, std::int64_t n, std::uint64_t reps,
                                               std::uint64_t seed, const BatchOptions& options) {
  if (n < 1) throw std::invalid_argument("simulate_batch: n must be >= 1");
  require_simulable(m);
  const Plan plan = make_plan(m, n, options.simulation);
  const auto means = m.lag_means(std::min<std::int64_t>(n - 1, m.horizon()));
  const double eeps = m.immigration().mean();

  std::vector<ReplicationSummary> out(static_cast<std::size_t>(reps));
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(reps, 1)));

  auto worker = [&](unsigned tid) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(n));
    for (std::uint64_t r = tid; r < reps; r += threads) {
      RandomStream rng(seed, r);
      run(m, plan, x, rng);
      ReplicationSummary row;
      row.rep = r;
      for (auto v : x) row.s_n = checked_add(row.s_n, v);
      row.x_n = x.back();
      row.m_n = terminal_martingale(x, means, eeps);
      out[static_cast<std::size_t>(r)] = row;
    }
  };

  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned tid = 0; tid < threads; ++tid) {
      pool.emplace_back([&, tid] {
        try {
          worker(tid);
        } catch (...) {
          errors[tid] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "t,x\n";
  for (std::size_t i = 0; i < t.counts.size(); ++i) os << (i + 1) << ',' << t.counts[i] << '\n';
}

void write_batch_csv(std::ostream& os, const std::vector<ReplicationSummary>& rows) {
  const auto old = os.precision(17);
  os << "rep,s_n,x_n,m_n\n";
  for (const auto& r : rows) os << r.rep << ',' << r.s_n << ',' << r.x_n << ',' << r.m_n << '\n';
  os.precision(old);
}

}  // namespace inar
