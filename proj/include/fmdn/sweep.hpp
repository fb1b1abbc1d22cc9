#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fmdn/config_io.hpp"

namespace fmdn {

/// A one-parameter sweep. `parameter` holds the canonical name, one of
/// f_U^A, f_D^A, f_D^G, h, theta, lambda, omega, r, V, d_tx, P_t, K, W.
struct SweepSpec {
  std::string parameter;
  std::vector<double> grid;
  std::vector<std::string> metrics;  // empty = all
  bool plot = false;
  bool simulate = false;
};

/// Metrics a sweep can record, in output order.
const std::vector<std::string>& sweep_metrics();

/// Maps an accepted spelling (canonical name, Greek letter or descriptive
/// alias) to the canonical parameter name; throws ConfigError otherwise.
std::string canonical_parameter(const std::string& name);

SweepSpec parse_sweep(const nlohmann::json& doc);
SweepSpec load_sweep(const std::string& path);

/// Sets `parameter` to `value` on the scenario. Fleet-wide knobs apply to
/// every UAV; traffic shares apply to the non-gateway UAVs only.
void apply_parameter(Scenario& s, const std::string& parameter, double value);

struct SweepRow {
  std::string param;
  double value = 0.0;
  std::string entity;
  std::string metric;
  double analytic = 0.0;
  bool has_sim = false;
  double sim = 0.0;
  double sim_stderr = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Evaluates every grid point (in parallel over `workers` threads, 0 =
/// hardware) and returns rows ordered by grid point, then metric, then
/// entity. A failing point yields a single row with entity "status" and
/// metric "error:<kind>" and the sweep carries on.
SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, int workers = 1);

inline constexpr const char* kCsvHeader = "param,value,entity,metric,analytic,sim,sim_stderr";

/// Long-form CSV, LF line endings, numbers with 12 significant digits.
std::string to_csv(const SweepResult& r);
/// Inverse of to_csv; throws ConfigError on a malformed table.
SweepResult parse_csv(const std::string& text);

/// Number formatting used by the CSV (printf %.12g).
std::string format_number(double x);

/// One SVG line chart per metric, one line per entity. Returns the paths
/// written, named <stem>_<metric>.svg.
std::vector<std::string> write_plots(const SweepResult& r, const std::string& stem);

}  // namespace fmdn
