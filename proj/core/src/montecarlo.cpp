#include "inar/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "inar/asymptotics.hpp"
#include "inar/errors.hpp"
#include "inar/json_io.hpp"
#include "inar/oracle.hpp"
#include "inar/random_stream.hpp"
#include "inar/recursions.hpp"
#include "inar/simulator.hpp"
#include "numeric.hpp"

namespace inar {

using detail::CompensatedSum;
using nlohmann::json;

namespace {

// Stream index for bootstrap resampling; far above any replication index.
constexpr std::uint64_t kBootstrapStream = 0xB0075742A9ULL << 20;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ValidationReport make_report(const std::string& theorem, const InarModel& m, std::int64_t n, std::uint64_t reps,
                             std::uint64_t seed) {
  ValidationReport r;
  r.theorem = theorem;
  r.model_fingerprint = fingerprint_hex(model_fingerprint(m));
  r.n = n;
  r.reps = reps;
  r.seed = seed;
  r.rng_algorithm = std::string(RandomStream::kAlgorithm);
  return r;
}

std::vector<ReplicationSummary> run_batch(const InarModel& m, std::int64_t n, std::uint64_t reps, std::uint64_t seed,
                                          const ValidationOptions& options) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  BatchOptions b;
  b.threads = options.threads;
  return simulate_batch(m, n, reps, seed, b);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

bool ReportCheck::pass() const { return statistic >= lower && statistic <= upper; }

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.pass(); });
}

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"statistic", number_or_null(c.statistic)},
                      {"target", number_or_null(c.target)},
                      {"lower", number_or_null(c.lower)},
                      {"upper", number_or_null(c.upper)},
                      {"pass", c.pass()}});
  }
  return json{{"theorem", r.theorem},
              {"model_fingerprint", r.model_fingerprint},
              {"n", r.n},
              {"reps", r.reps},
              {"seed", r.seed},
              {"rng", r.rng_algorithm},
              {"checks", checks},
              {"metadata", r.metadata},
              {"runtime_seconds", r.runtime_seconds},
              {"verdict", r.pass() ? "pass" : "fail"}};
}

void write_report_csv_header(std::ostream& os) { os << "theorem,n,reps,seed,checks,failed,pass,runtime_seconds\n"; }

void write_report_csv_row(std::ostream& os, const ValidationReport& r) {
  const auto failed = std::count_if(r.checks.begin(), r.checks.end(), [](const ReportCheck& c) { return !c.pass(); });
  os << r.theorem << ',' << r.n << ',' << r.reps << ',' << r.seed << ',' << r.checks.size() << ',' << failed << ','
     << (r.pass() ? "true" : "false") << ',' << r.runtime_seconds << '\n';
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ks_statistic_normal(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const double size = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / size - f, f - static_cast<double>(i) / size});
  }
  return d;
}

ValidationReport validate_lln(const InarModel& m, std::int64_t n, std::uint64_t reps, std::uint64_t seed,
                              const ValidationOptions& options) {
  Stopwatch clock;
  const double mu = options.mu_override.value_or(lln_mu(m));
  const double sigma2 = options.sigma2_override.value_or(clt_sigma2(m));
  const auto rows = run_batch(m, n, reps, seed, options);

  CompensatedSum acc;
  for (const auto& r : rows) acc.add(static_cast<double>(r.s_n) / static_cast<double>(n));
  const double mean = acc.value() / static_cast<double>(reps);
  const double band = 4.0 * std::sqrt(sigma2 / (static_cast<double>(n) * static_cast<double>(reps)));

  auto report = make_report("lln", m, n, reps, seed);
  report.checks.push_back({"mean(S_n/n)", mean, mu, mu - band, mu + band});
  report.metadata["band"] = "4 sqrt(sigma^2 / (n reps))";
  report.metadata["sigma2"] = sigma2;
  report.runtime_seconds = clock.seconds();
  return report;
}

ValidationReport validate_clt(const InarModel& m, std::int64_t n, std::uint64_t reps, std::uint64_t seed,
                              const ValidationOptions& options) {
  Stopwatch clock;
  if (reps < kMinCltReps) {
    throw std::invalid_argument("validate_clt: reps must be >= " + std::to_string(kMinCltReps));
  }
  const double mu = options.mu_override.value_or(lln_mu(m));
  const double sigma2 = options.sigma2_override.value_or(clt_sigma2(m));
  if (!(sigma2 > 0.0)) throw DegenerateModel("validate_clt: sigma^2 = 0, the normalized sum is degenerate");
  const auto rows = run_batch(m, n, reps, seed, options);

  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(nd * sigma2);
  std::vector<double> z;
  z.reserve(rows.size());
  for (const auto& r : rows) z.push_back((static_cast<double>(r.s_n) - nd * mu) / scale);
  const double ks = ks_statistic_normal(z);
  const double critical = 1.95 / std::sqrt(static_cast<double>(reps));

  auto report = make_report("clt", m, n, reps, seed);
  report.checks.push_back({"ks_statistic", ks, 0.0, 0.0, critical});
  report.metadata["critical_value"] = "1.95 / sqrt(reps), asymptotic alpha = 0.001";
  report.metadata["mu"] = mu;
  report.metadata["sigma2"] = sigma2;
  report.runtime_seconds = clock.seconds();
  return report;
}

std::uint64_t mdp_required_reps(const InarModel& m, double beta, std::int64_t n, double x, double min_count) {
  const double nd = static_cast<double>(n);
  const double c = std::pow(nd, beta);
  const double p = 1.0 - normal_cdf(x * c / std::sqrt(nd * clt_sigma2(m)));
  if (!(p > 0.0)) return UINT64_MAX;
  return static_cast<std::uint64_t>(std::ceil(min_count / p));
}

ValidationReport validate_mdp(const InarModel& m, double beta, std::int64_t n, std::uint64_t reps, double x,
                              std::uint64_t seed, const ValidationOptions& options) {
  Stopwatch clock;
  if (!(beta > 0.5 && beta < 1.0)) throw std::invalid_argument("validate_mdp: beta must lie in (0.5, 1)");
  if (!(x > 0.0)) throw std::invalid_argument("validate_mdp: x must be positive");
  const double nd = static_cast<double>(n);
  const double c = std::pow(nd, beta);
  const double sigma2 = options.sigma2_override.value_or(clt_sigma2(m));
  const double p_normal = 1.0 - normal_cdf(x * c / std::sqrt(nd * sigma2));
  const double expected = p_normal * static_cast<double>(reps);
  if (expected < 50.0) {
    throw InsufficientTailMass("validate_mdp: expected tail count " + std::to_string(expected) +
                               " < 50 under the normal approximation; need reps >= " +
                               std::to_string(mdp_required_reps(m, beta, n, x)));
  }
  const double mu = options.mu_override.value_or(lln_mu(m));
  const double J = x * x / (2.0 * sigma2);
  const auto rows = run_batch(m, n, reps, seed, options);

  std::uint64_t hits = 0;
  for (const auto& r : rows) {
    if ((static_cast<double>(r.s_n) - nd * mu) / c >= x) ++hits;
  }
  const double p_hat = static_cast<double>(hits) / static_cast<double>(reps);
  const double rate = p_hat > 0.0 ? -(nd / (c * c)) * std::log(p_hat) : detail::kInf;

  auto report = make_report("mdp", m, n, reps, seed);
  report.checks.push_back({"rate_estimate", rate, J, 0.6 * J, 1.4 * J});
  report.metadata["beta"] = beta;
  report.metadata["x"] = x;
  report.metadata["c_n"] = c;
  report.metadata["tail_count"] = hits;
  report.metadata["p_hat"] = p_hat;
  report.metadata["expected_tail_count_normal"] = expected;
  report.metadata["band"] = "[0.6, 1.4] J(x); engineering choice, no finite-n error bound is available";
  report.runtime_seconds = clock.seconds();
  return report;
}

ValidationReport validate_gamma(const InarModel& m, const std::vector<double>& theta_grid, std::int64_t n,
                                std::uint64_t reps, std::uint64_t seed, const ValidationOptions& options,
                                std::int64_t exact_n) {
  Stopwatch clock;
  const CriticalTilt tc = theta_c(m);
  for (double t : theta_grid) {
    if (!(t <= 0.5 * tc.value)) {
      throw std::invalid_argument("validate_gamma: theta = " + std::to_string(t) + " exceeds 0.5 theta_c = " +
                                  std::to_string(0.5 * tc.value));
    }
  }
  const auto rows = run_batch(m, n, reps, seed, options);
  const double nd = static_cast<double>(n);

  auto estimate = [&](double theta, const std::vector<std::size_t>* idx) {
    std::vector<double> terms;
    terms.reserve(rows.size());
    if (idx) {
      for (auto i : *idx) terms.push_back(theta * static_cast<double>(rows[i].s_n));
    } else {
      for (const auto& r : rows) terms.push_back(theta * static_cast<double>(r.s_n));
    }
    return (detail::log_sum_exp(terms) - std::log(static_cast<double>(terms.size()))) / nd;
  };

  auto report = make_report("ldp-gamma", m, n, reps, seed);
  RandomStream boot(seed, kBootstrapStream);
  std::vector<std::vector<std::size_t>> resamples(kBootstrapResamples, std::vector<std::size_t>(rows.size()));
  for (auto& r : resamples) {
    for (auto& i : r) i = static_cast<std::size_t>(boot.uniform() * static_cast<double>(rows.size()));
  }

  json exact = json::array();
  for (double theta : theta_grid) {
    const double target = gamma(m, theta);
    const double emp = estimate(theta, nullptr);
    CompensatedSum s1, s2;
    for (const auto& r : resamples) {
      const double e = estimate(theta, &r);
      s1.add(e);
      s2.add(e * e);
    }
    const double bm = s1.value() / kBootstrapResamples;
    const double se = std::sqrt(std::max(0.0, s2.value() / kBootstrapResamples - bm * bm));
    const double tol = std::max(0.02, 3.0 * se);
    report.checks.push_back({"empirical_gamma(theta=" + std::to_string(theta) + ")", emp, target, target - tol,
                             target + tol});

    const double route = log_mgf_exact(m, theta, exact_n) / static_cast<double>(exact_n);
    report.checks.push_back({"exact_gamma(theta=" + std::to_string(theta) + ")", route, target, target - 1e-3,
                             target + 1e-3});
    exact.push_back({{"theta", theta}, {"bootstrap_se", se}});
  }
  report.metadata["exact_n"] = exact_n;
  report.metadata["bootstrap_resamples"] = kBootstrapResamples;
  report.metadata["per_theta"] = exact;
  report.runtime_seconds = clock.seconds();
  return report;
}

ValidationReport validate_cesaro(const InarModel& m, std::int64_t n, double rel_tol) {
  Stopwatch clock;
  const auto c = cesaro_check(m, n);
  auto report = make_report("cesaro", m, n, 0, 0);
  auto add = [&](const char* name, const CesaroPair& p) {
    const double band = p.limit == 0.0 ? rel_tol : rel_tol * std::fabs(p.limit);
    report.checks.push_back({name, p.empirical, p.limit, p.limit - band, p.limit + band});
  };
  add("mean(G1)", c.g1);
  add("mean(G1^2)", c.g1_squared);
  add("mean(G2)", c.g2);
  report.metadata["relative_tolerance"] = rel_tol;
  report.runtime_seconds = clock.seconds();
  return report;
}

std::vector<double> oracle_theta_grid() { return {-1.0, -0.3, 0.0, 0.4, std::log(2.0)}; }

ValidationReport validate_oracle(const InarModel& m, std::int64_t max_n, const std::vector<double>& theta_grid,
                                 double tol) {
  Stopwatch clock;
  auto report = make_report("oracle", m, max_n, 0, 0);
  double worst = 0.0;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    const auto law = enumerate_sn(m, n);
    for (double theta : theta_grid) {
      const double diff = std::fabs(log_mgf_exact(m, theta, n) - oracle_log_mgf(law, theta));
      worst = std::max(worst, std::isnan(diff) ? detail::kInf : diff);
    }
  }
  report.checks.push_back({"max|log_mgf_exact - oracle|", worst, 0.0, 0.0, tol});
  report.metadata["theta_grid"] = theta_grid;
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace inar
