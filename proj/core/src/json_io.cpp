#include "inar/json_io.hpp"

#include <cstdio>
#include <initializer_list>
#include <set>
#include <stdexcept>

namespace inar {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected a JSON object");
}

void require_keys(const json& j, const std::string& ctx, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError(ctx + ": unknown key \"" + key + "\"");
  }
  for (const char* key : allowed) {
    if (!j.contains(key)) throw ConfigError(ctx + ": missing key \"" + std::string(key) + "\"");
  }
}

std::string type_of(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  if (!j.contains("type") || !j["type"].is_string()) throw ConfigError(ctx + ": missing string field \"type\"");
  return j["type"].get<std::string>();
}

double number(const json& j, const char* key, const std::string& ctx) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(ctx + ": field \"" + key + "\" must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& j, const char* key, const std::string& ctx) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(ctx + ": field \"" + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::vector<double> number_array(const json& j, const char* key, const std::string& ctx) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(ctx + ": field \"" + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(ctx + ": field \"" + key + "\" must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

template <class F>
auto wrap_invalid(const std::string& ctx, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
}

}  // namespace

json to_json(const CountDistribution& d) {
  return std::visit(Overloaded{
                        [](const dist::Constant& c) { return json{{"type", "constant"}, {"value", c.value}}; },
                        [](const dist::Bernoulli& b) { return json{{"type", "bernoulli"}, {"p", b.p}}; },
                        [](const dist::Binomial& b) { return json{{"type", "binomial"}, {"n", b.trials}, {"p", b.p}}; },
                        [](const dist::Poisson& p) { return json{{"type", "poisson"}, {"lambda", p.lambda}}; },
                        [](const dist::Geometric& g) { return json{{"type", "geometric"}, {"p", g.p}}; },
                        [](const dist::FiniteSupport& f) { return json{{"type", "finite_support"}, {"probs", f.probs}}; },
                    },
                    d.params());
}

CountDistribution distribution_from_json(const json& j) {
  const std::string ctx = "distribution";
  const auto type = type_of(j, ctx);
  const std::string tctx = ctx + " \"" + type + "\"";
  return wrap_invalid(tctx, [&] {
    if (type == "constant") {
      require_keys(j, tctx, {"type", "value"});
      return CountDistribution::constant(integer(j, "value", tctx));
    }
    if (type == "bernoulli") {
      require_keys(j, tctx, {"type", "p"});
      return CountDistribution::bernoulli(number(j, "p", tctx));
    }
    if (type == "binomial") {
      require_keys(j, tctx, {"type", "n", "p"});
      return CountDistribution::binomial(integer(j, "n", tctx), number(j, "p", tctx));
    }
    if (type == "poisson") {
      require_keys(j, tctx, {"type", "lambda"});
      return CountDistribution::poisson(number(j, "lambda", tctx));
    }
    if (type == "geometric") {
      require_keys(j, tctx, {"type", "p"});
      return CountDistribution::geometric(number(j, "p", tctx));
    }
    if (type == "finite_support") {
      require_keys(j, tctx, {"type", "probs"});
      return CountDistribution::finite_support(number_array(j, "probs", tctx));
    }
    throw ConfigError(ctx + ": unknown type \"" + type + "\"");
  });
}

json to_json(const DecayLaw& law) {
  return std::visit(Overloaded{
                        [](const decay::Geometric& g) { return json{{"type", "geometric"}, {"c", g.c}, {"r", g.r}}; },
                        [](const decay::PowerLaw& p) { return json{{"type", "power_law"}, {"c", p.c}, {"a", p.a}}; },
                        [](const decay::FiniteList& f) { return json{{"type", "finite_list"}, {"values", f.values}}; },
                    },
                    law);
}

DecayLaw decay_from_json(const json& j) {
  const std::string ctx = "decay";
  const auto type = type_of(j, ctx);
  const std::string tctx = ctx + " \"" + type + "\"";
  if (type == "geometric") {
    require_keys(j, tctx, {"type", "c", "r"});
    return decay::Geometric{number(j, "c", tctx), number(j, "r", tctx)};
  }
  if (type == "power_law") {
    require_keys(j, tctx, {"type", "c", "a"});
    return decay::PowerLaw{number(j, "c", tctx), number(j, "a", tctx)};
  }
  if (type == "finite_list") {
    require_keys(j, tctx, {"type", "values"});
    return decay::FiniteList{number_array(j, "values", tctx)};
  }
  throw ConfigError(ctx + ": unknown type \"" + type + "\"");
}

json to_json(const OffspringSequence& seq) {
  return std::visit(Overloaded{
                        [](const offspring::Explicit& e) {
                          json laws = json::array();
                          for (const auto& d : e.laws) laws.push_back(to_json(d));
                          return json{{"type", "explicit"}, {"laws", laws}};
                        },
                        [](const offspring::PoissonFamily& p) {
                          return json{{"type", "poisson_family"}, {"decay", to_json(p.decay)}};
                        },
                    },
                    seq);
}

OffspringSequence offspring_from_json(const json& j) {
  const std::string ctx = "offspring";
  const auto type = type_of(j, ctx);
  const std::string tctx = ctx + " \"" + type + "\"";
  if (type == "explicit") {
    require_keys(j, tctx, {"type", "laws"});
    if (!j["laws"].is_array()) throw ConfigError(tctx + ": \"laws\" must be an array");
    offspring::Explicit e;
    for (const auto& d : j["laws"]) e.laws.push_back(distribution_from_json(d));
    return e;
  }
  if (type == "poisson_family") {
    require_keys(j, tctx, {"type", "decay"});
    return offspring::PoissonFamily{decay_from_json(j["decay"])};
  }
  throw ConfigError(ctx + ": unknown type \"" + type + "\"");
}

json to_json(const InarModel& m) {
  return json{{"immigration", to_json(m.immigration())}, {"offspring", to_json(m.offspring())}};
}

InarModel model_from_json(const json& j) {
  require_object(j, "model");
  require_keys(j, "model", {"immigration", "offspring"});
  auto immigration = distribution_from_json(j["immigration"]);
  auto offspring = offspring_from_json(j["offspring"]);
  return wrap_invalid("model", [&] { return InarModel(std::move(immigration), std::move(offspring)); });
}

std::uint64_t model_fingerprint(const InarModel& m) {
  const std::string canonical = to_json(m).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

}  // namespace inar
