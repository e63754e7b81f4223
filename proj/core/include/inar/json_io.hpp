#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "inar/distributions.hpp"
#include "inar/model.hpp"

namespace inar {

/// Thrown for schema errors in distribution/model JSON (unknown keys, bad types).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tagged-object encoding, e.g. {"type":"poisson","lambda":0.5}.
nlohmann::json to_json(const CountDistribution& d);
CountDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DecayLaw& law);
DecayLaw decay_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OffspringSequence& seq);
OffspringSequence offspring_from_json(const nlohmann::json& j);

// {"immigration": <dist>, "offspring": <offspring>}
nlohmann::json to_json(const InarModel& m);
InarModel model_from_json(const nlohmann::json& j);

/// FNV-1a hash of the canonical (key-sorted, compact) JSON form of the model.
std::uint64_t model_fingerprint(const InarModel& m);
std::string fingerprint_hex(std::uint64_t fp);

}  // namespace inar
