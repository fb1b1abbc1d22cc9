#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmdn/analysis.hpp"
#include "fmdn/link_model.hpp"
#include "fmdn/topology.hpp"

namespace fmdn {

enum class ArrivalMode {
  injected,  // Bernoulli(a_i) uplink packets per slot at UAV i
  poisson,   // Poisson(a_i) packets per slot
  scripted,  // only the packets listed in SimConfig::script
};

enum class ContactMode {
  geometric,  // threshold the instantaneous distance of the circling UAVs
  bernoulli,  // independent Bernoulli(xi) per pair and slot
};

struct ScriptedPacket {
  std::int64_t slot = 0;
  int uav = 0;  // 0-based source UAV
};

struct SimConfig {
  FleetConfig fleet;
  std::int64_t slots = 1'000'000;
  std::int64_t warmup = 100'000;
  std::uint64_t seed = 1;
  int replications = 1;
  /// Worker threads for replications; 0 picks the hardware concurrency.
  int threads = 0;
  ArrivalMode arrival_mode = ArrivalMode::injected;
  ContactMode contact_mode = ContactMode::geometric;
  std::vector<ScriptedPacket> script;
  LinkOverrides overrides;
  /// Wall-clock length of a slot, used to advance the angular phases.
  double slot_seconds = 50e-6;
  /// Sample every queue length every this many slots; 0 picks slots / 200.
  std::int64_t trace_interval = 0;
  std::int64_t queue_watermark = 100'000'000;

  std::int64_t effective_trace_interval() const;
  void validate() const;
};

/// Welford accumulator.
struct RunningStat {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

/// Per-stream packet accounting over the whole run, warm-up included.
struct Ledger {
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped_retry = 0;
  std::int64_t dropped_backhaul = 0;
  std::int64_t residual = 0;  // queued or in flight at the end

  std::int64_t dropped() const { return dropped_retry + dropped_backhaul; }
  bool balanced() const { return generated == delivered + dropped() + residual; }
};

struct QueueObservation {
  double cycle_load = 0.0;  // fraction of cycle starts finding the queue non-empty
  double time_load = 0.0;   // fraction of slots the queue is non-empty
  std::int64_t final_length = 0;
  double growth_slope = 0.0;  // packets/slot over the second half of the trace
  std::vector<std::int64_t> trace;
};

struct ReplicationResult {
  std::vector<QueueObservation> up, down_air, down_ground;  // per UAV
  std::vector<Ledger> ledger_up, ledger_down;               // per stream
  std::vector<double> theta_up, theta_down;                 // packets/slot
  std::vector<RunningStat> delay_up, delay_down;            // per stream, slots
  std::vector<RunningStat> hop_up, hop_down_air, hop_down_ground;  // per UAV
  int max_attempts_seen = 0;
};

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // across replications, 0 with a single one
};

struct SimMeasurements {
  SimConfig config;
  std::vector<ReplicationResult> runs;

  std::vector<Estimate> load_up, load_down_air, load_down_ground;
  std::vector<Estimate> time_load_up, time_load_down_air, time_load_down_ground;
  std::vector<Estimate> slope_up, slope_down_air, slope_down_ground;
  std::vector<Estimate> theta_up, theta_down, delay_up, delay_down;
  std::vector<Estimate> hop_up, hop_down_air, hop_down_ground;
  std::vector<Ledger> ledger_up, ledger_down;  // summed over replications
  bool conserved = true;
  int max_attempts_seen = 0;
};

ReplicationResult run_replication(const SimConfig& cfg, const LinkModel& model, int replication);

/// Runs every replication (in parallel when threads allow) and aggregates.
SimMeasurements run(const SimConfig& cfg);

/// Least-squares slope of the second half of `trace`, per slot.
double growth_slope(const std::vector<std::int64_t>& trace, std::int64_t interval);

struct Tolerances {
  double load_abs = 0.05;
  double theta_rel = 0.10;
  double delay_rel = 0.15;
};

struct ComparisonRow {
  std::string entity;
  std::string metric;
  double analytic = 0.0;
  double sim = 0.0;
  double sim_stderr = 0.0;
  double error = 0.0;  // absolute or relative, per `relative`
  double tolerance = 0.0;
  bool relative = false;
  bool checked = true;  // false for rows reported but not asserted
  bool pass = true;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  bool pass() const;
  int failures() const;
};

/// Uplink queues whose analytic load is clamped at 1 or whose simulated
/// length keeps growing.
struct SaturationFlags {
  std::vector<bool> analytic, sim;
};

SaturationFlags saturation_flags(const Analysis& a, const SimMeasurements& sim,
                                 double slope_threshold = 1e-4);

/// Puts analytic and simulated figures side by side. Both inputs must come
/// from the same scenario: `analytic_hash` and `sim_hash` are the config
/// hashes each side was produced from; a mismatch throws UsageError.
ComparisonReport compare(const Analysis& analytic, const SimMeasurements& sim,
                         const std::string& analytic_hash, const std::string& sim_hash,
                         const Tolerances& tol = {});

}  // namespace fmdn
