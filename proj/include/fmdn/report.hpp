#pragma once

#include <string>

#include <json.hpp>

#include "fmdn/analysis.hpp"
#include "fmdn/config_io.hpp"
#include "fmdn/des_sim.hpp"

namespace fmdn {

/// Machine-readable reports. Every report embeds the scenario and its hash
/// so that cached results can be matched later. Non-finite numbers are
/// written as null.
nlohmann::json analysis_report(const Scenario& s, const Analysis& a);
nlohmann::json simulation_report(const Scenario& s, const SimMeasurements& m);
nlohmann::json comparison_report(const ComparisonReport& r, const std::string& config_hash);

/// A report read back from disk: the scenario it embeds, the hash it claims
/// and, for simulation reports, the aggregated measurements (no per-run
/// detail).
struct CachedReport {
  std::string kind;
  std::string config_hash;
  Scenario scenario;
  SimMeasurements sim;
};

CachedReport read_report(const nlohmann::json& doc);
CachedReport load_report(const std::string& path);

/// Pretty JSON text with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace fmdn
