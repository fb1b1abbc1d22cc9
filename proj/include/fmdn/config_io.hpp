#pragma once

#include <string>

#include <json.hpp>

#include "fmdn/des_sim.hpp"
#include "fmdn/errors.hpp"
#include "fmdn/topology.hpp"

namespace fmdn {

inline constexpr int kSchemaVersion = 1;

/// A scenario file: the fleet plus optional simulation settings.
struct Scenario {
  FleetConfig fleet;
  LinkOverrides overrides;
  SimConfig sim;  // sim.fleet and sim.overrides mirror the fields above
};

/// Strict parse: unknown keys, wrong types and out-of-range values are all
/// reported together in one ConfigError (one line per field). Missing keys
/// keep their defaults.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

nlohmann::json to_json(const Scenario& s);

/// FNV-1a over the canonical dump of the scenario's model inputs (fleet,
/// channel, MAC, traffic, overrides). Simulation settings are excluded, so
/// an analytic run and a simulation of the same scenario share a hash.
std::string scenario_hash(const Scenario& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmdn
