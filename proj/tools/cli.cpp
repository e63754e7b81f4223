#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "inar/asymptotics.hpp"
#include "inar/errors.hpp"
#include "inar/json_io.hpp"
#include "inar/montecarlo.hpp"
#include "inar/oracle.hpp"
#include "inar/random_stream.hpp"
#include "inar/recursions.hpp"
#include "inar/simulator.hpp"

namespace inar::cli {

using nlohmann::json;

namespace {

// Bad flags, unreadable files, malformed input: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw UsageError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + what);
  }
}

InarModel load_model(const std::string& path) {
  const json j = parse_json_file(path);
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": not a number: \"" + item + "\"");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

// "a,b,c", "lo:hi:count", or "@file.json" holding a theory report or a bare array.
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  if (!spec.empty() && spec.front() == '@') {
    const json j = parse_json_file(spec.substr(1));
    std::vector<double> out;
    if (j.is_array()) {
      for (const auto& v : j) {
        if (!v.is_number()) throw UsageError(flag + ": grid array must contain numbers");
        out.push_back(v.get<double>());
      }
    } else if (j.is_object() && j.contains("I") && j["I"].is_array()) {
      for (const auto& row : j["I"]) {
        if (!row.is_object() || !row.contains("x") || !row["x"].is_number()) {
          throw UsageError(flag + ": \"I\" rows must carry a numeric \"x\"");
        }
        out.push_back(row["x"].get<double>());
      }
    } else {
      throw UsageError(flag + ": expected a JSON array or a theory report");
    }
    if (out.empty()) throw UsageError(flag + ": empty grid");
    return out;
  }
  if (std::count(spec.begin(), spec.end(), ':') == 2) {
    std::string s = spec;
    std::replace(s.begin(), s.end(), ':', ',');
    const auto parts = parse_number_list(s, flag);
    const double count = parts[2];
    if (!(count >= 1.0) || count != std::floor(count)) throw UsageError(flag + ": count must be a positive integer");
    std::vector<double> out;
    for (int i = 0; i < static_cast<int>(count); ++i) {
      out.push_back(count == 1.0 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (count - 1.0));
    }
    return out;
  }
  return parse_number_list(spec, flag);
}

std::vector<std::int64_t> parse_horizons(const std::string& spec) {
  std::vector<std::int64_t> out;
  for (double v : parse_number_list(spec, "--horizons")) {
    if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("--horizons: entries must be positive integers");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

struct Common {
  std::string model_path;
  std::string out_path;
  std::string format = "json";
};

// Output goes to --out when given, otherwise to the command's stdout stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot write " + path);
    }
    os_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
  if (seed) return *seed;
  const auto drawn = RandomStream::entropy_seed();
  err << "inar: no --seed given; drew seed " << drawn << " from system entropy\n";
  return drawn;
}

int cmd_theory(const Common& c, const std::string& grid_spec, std::ostream& out) {
  const InarModel m = load_model(c.model_path);
  const TheorySummary s = summarize(m);
  const std::vector<double> grid = grid_spec.empty() ? std::vector<double>{s.mu} : parse_grid(grid_spec, "--x-grid");

  std::optional<double> sigma2_positive;
  if (s.sigma2 > 0.0) sigma2_positive = s.sigma2;

  json I = json::array();
  json J = json::array();
  for (double x : grid) {
    I.push_back({{"x", x}, {"value", number_or_null(ldp_rate_I(m, x))}});
    J.push_back({{"x", x}, {"value", sigma2_positive ? number_or_null(mdp_rate_J(m, x)) : json(nullptr)}});
  }
  json report{{"mu", s.mu},
              {"sigma2", s.sigma2},
              {"theta_c", number_or_null(s.theta_c.value)},
              {"theta_c_attained", s.theta_c.attained},
              {"theta_c_maximizer", s.theta_c.maximizer ? json(*s.theta_c.maximizer) : json(nullptr)},
              {"offspring_mean_l1", s.offspring_mean_l1},
              {"offspring_var_l1", s.offspring_var_l1},
              {"model_fingerprint", fingerprint_hex(model_fingerprint(m))},
              {"I", I},
              {"J", J}};
  json notes = json::array();
  if (!std::isfinite(s.theta_c.value)) {
    notes.push_back("F is unbounded above: theta_c = +inf (null) and Gamma is finite everywhere");
  } else if (!s.theta_c.attained) {
    notes.push_back(
        "F is strictly increasing with a finite supremum: theta_c is a limit, F(x) = theta has a unique root for "
        "theta < theta_c, and theta = theta_c itself is outside the effective domain");
  }
  if (!sigma2_positive) notes.push_back("sigma2 = 0: the moderate deviation rate J is undefined (null)");
  report["notes"] = notes;

  Sink sink(c.out_path, out);
  if (c.format == "csv") {
    auto& os = sink.stream();
    os.precision(17);
    os << "x,I,J\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << grid[i] << ',' << I[i]["value"].dump() << ',' << J[i]["value"].dump() << '\n';
    }
  } else {
    sink.stream() << report.dump(2) << '\n';
  }
  return kPass;
}

struct SimulateArgs {
  std::int64_t n = 0;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string sampling = "additive";
};

int cmd_simulate(const Common& c, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const InarModel m = load_model(c.model_path);
  require_lln_assumptions(m);
  const std::uint64_t seed = resolve_seed(a.seed, err);
  SimulationOptions sim;
  sim.sampling = a.sampling == "individual" ? CompoundSampling::individual : CompoundSampling::additive;

  Sink sink(c.out_path, out);
  if (a.reps) {
    BatchOptions b;
    b.simulation = sim;
    b.threads = a.threads;
    write_batch_csv(sink.stream(), simulate_batch(m, a.n, *a.reps, seed, b));
  } else {
    RandomStream rng(seed, 0);
    write_trajectory_csv(sink.stream(), simulate(m, a.n, rng, sim));
  }
  (c.out_path.empty() ? err : out) << "seed: " << seed << '\n';
  return kPass;
}

struct ValidateArgs {
  std::string checks;
  std::optional<std::int64_t> n;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> seed;
  double beta = 0.6;
  std::string x_grid;
  std::string theta;
  unsigned threads = 0;
};

int cmd_validate(const Common& c, const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const InarModel m = load_model(c.model_path);
  require_lln_assumptions(m);

  std::vector<std::string> selected;
  {
    std::stringstream ss(a.checks);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      static const std::vector<std::string> known{"lln", "clt", "mdp", "gamma", "cesaro", "oracle"};
      if (std::find(known.begin(), known.end(), item) == known.end()) {
        throw UsageError("--checks: unknown check \"" + item + "\" (expected lln|clt|mdp|gamma|cesaro|oracle)");
      }
      selected.push_back(item);
    }
  }
  if (selected.empty()) throw UsageError("--checks: select at least one of lln|clt|mdp|gamma|cesaro|oracle");

  const bool random = std::any_of(selected.begin(), selected.end(), [](const std::string& s) {
    return s == "lln" || s == "clt" || s == "mdp" || s == "gamma";
  });
  const std::uint64_t seed = random ? resolve_seed(a.seed, err) : a.seed.value_or(0);
  ValidationOptions opts;
  opts.threads = a.threads;

  std::vector<ValidationReport> reports;
  for (const auto& check : selected) {
    if (check == "lln") {
      reports.push_back(validate_lln(m, a.n.value_or(5000), a.reps.value_or(500), seed, opts));
    } else if (check == "clt") {
      reports.push_back(validate_clt(m, a.n.value_or(2000), a.reps.value_or(2000), seed, opts));
    } else if (check == "mdp") {
      const double x = a.x_grid.empty() ? 1.0 : parse_grid(a.x_grid, "--x-grid").front();
      const std::int64_t n = a.n.value_or(10000);
      const std::uint64_t reps = a.reps.value_or(std::max<std::uint64_t>(1000, mdp_required_reps(m, a.beta, n, x)));
      reports.push_back(validate_mdp(m, a.beta, n, reps, x, seed, opts));
    } else if (check == "gamma") {
      std::vector<double> grid;
      if (!a.theta.empty()) {
        grid = parse_grid(a.theta, "--theta");
      } else {
        const double tc = theta_c(m).value;
        const double top = std::isfinite(tc) ? 0.5 * tc : 0.1;
        grid = {0.2 * top, 0.5 * top, top};
      }
      reports.push_back(validate_gamma(m, grid, a.n.value_or(2000), a.reps.value_or(2000), seed, opts));
    } else if (check == "cesaro") {
      reports.push_back(validate_cesaro(m, a.n.value_or(100000)));
    } else {
      reports.push_back(validate_oracle(m, a.n.value_or(4), oracle_theta_grid()));
    }
  }

  const bool pass = std::all_of(reports.begin(), reports.end(), [](const ValidationReport& r) { return r.pass(); });
  Sink sink(c.out_path, out);
  if (c.format == "csv") {
    write_report_csv_header(sink.stream());
    for (const auto& r : reports) write_report_csv_row(sink.stream(), r);
  } else {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    sink.stream() << json{{"seed", seed}, {"pass", pass}, {"reports", arr}}.dump(2) << '\n';
  }
  for (const auto& r : reports) err << r.theorem << ": " << (r.pass() ? "pass" : "FAIL") << '\n';
  return pass ? kPass : kValidationFailed;
}

struct RecursionArgs {
  std::string table = "f";
  std::string theta;
  std::int64_t n = 100;
  double beta = 0.75;
  std::string horizons = "1000,10000,100000";
};

int cmd_recursion(const Common& c, const RecursionArgs& a, std::ostream& out) {
  const InarModel m = load_model(c.model_path);
  const double theta = a.theta.empty() ? 1.0 : parse_grid(a.theta, "--theta").front();
  Sink sink(c.out_path, out);
  if (a.table == "f") {
    write_f_sequence_csv(sink.stream(), f_sequence(m, theta, a.n));
  } else if (a.table == "gbar") {
    write_gbar_csv(sink.stream(), gbar_tables(m, a.n));
  } else if (a.table == "mdp") {
    const MdpSchedule sched(a.beta, parse_horizons(a.horizons));
    write_mdp_curve_csv(sink.stream(), mdp_mgf_curve(m, theta, sched), mdp_mgf_limit(m, theta));
  } else {
    write_exact_law_csv(sink.stream(), enumerate_sn(m, a.n));
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and limit theory for INAR(infinity) count processes", "inar"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--model", common.model_path, "Model JSON file")->required();
    sub->add_option("--out", common.out_path, "Output file (default: stdout)");
    if (with_format) {
      sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    }
  };

  std::string theory_grid;
  auto* theory = app.add_subcommand("theory", "Closed-form and numerically solved limit quantities");
  add_common(theory, true);
  theory->add_option("--x-grid", theory_grid, "x values: a,b,c | lo:hi:count | @theory.json");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a trajectory (CSV t,x) or a batch (CSV rep,s_n,x_n,m_n)");
  add_common(simulate_cmd, false);
  simulate_cmd->add_option("--n", sim.n, "Horizon")->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--reps", sim.reps, "Replications; switches to batch summaries")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sim.seed, "Master seed (default: system entropy)");
  simulate_cmd->add_option("--threads", sim.threads, "Worker threads (0 = hardware)");
  simulate_cmd->add_option("--sampling", sim.sampling, "Offspring sum sampling")
      ->check(CLI::IsMember({"additive", "individual"}));

  ValidateArgs val;
  auto* validate_cmd = app.add_subcommand("validate", "Run validations; exit 1 if any fails");
  add_common(validate_cmd, true);
  validate_cmd->add_option("--checks", val.checks, "Comma list of lln,clt,mdp,gamma,cesaro,oracle")->required();
  validate_cmd->add_option("--n", val.n, "Horizon (oracle: largest n)")->check(CLI::PositiveNumber);
  validate_cmd->add_option("--reps", val.reps, "Replications")->check(CLI::PositiveNumber);
  validate_cmd->add_option("--seed", val.seed, "Master seed (default: system entropy)");
  validate_cmd->add_option("--beta", val.beta, "MDP speed exponent, c(n) = n^beta");
  validate_cmd->add_option("--x-grid", val.x_grid, "MDP threshold x (first entry)");
  validate_cmd->add_option("--theta", val.theta, "Gamma-limit theta grid");
  validate_cmd->add_option("--threads", val.threads, "Worker threads (0 = hardware)");

  RecursionArgs rec;
  auto* recursion = app.add_subcommand("recursion", "Dump f_k, G-bar tables, the MDP curve or the exact law of S_n");
  add_common(recursion, false);
  recursion->add_option("--table", rec.table, "f | gbar | mdp | law")->check(CLI::IsMember({"f", "gbar", "mdp", "law"}));
  recursion->add_option("--theta", rec.theta, "Tilt theta");
  recursion->add_option("--n", rec.n, "Horizon")->check(CLI::PositiveNumber);
  recursion->add_option("--beta", rec.beta, "MDP speed exponent");
  recursion->add_option("--horizons", rec.horizons, "MDP curve horizons, comma separated");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsage;
  }

  try {
    if (theory->parsed()) return cmd_theory(common, theory_grid, out);
    if (simulate_cmd->parsed()) return cmd_simulate(common, sim, out, err);
    if (validate_cmd->parsed()) return cmd_validate(common, val, out, err);
    return cmd_recursion(common, rec, out);
  } catch (const AssumptionViolation& e) {
    err << "inar: " << e.what() << '\n';
    return kAssumption;
  } catch (const UsageError& e) {
    err << "inar: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "inar: " << common.model_path << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "inar: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "inar: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace inar::cli
