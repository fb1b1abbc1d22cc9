#pragma once

#include <vector>

#include "fmdn/channel.hpp"
#include "fmdn/mac.hpp"
#include "fmdn/topology.hpp"

namespace fmdn {

/// Everything the queueing layer needs to know about one UAV's PHY/MAC.
struct UavLink {
  double covered = 0.0;       // n_i (real-valued expectation)
  int ground_contenders = 1;  // ceil(n_i) + 1
  double coverage = 0.0;      // P_cov
  DcfOperatingPoint air;
  DcfOperatingPoint ground;
  double saturation = 0.0;    // S
  /// Uplink packets per slot entering this UAV from its own devices.
  double source_rate = 0.0;

  LinkStats up;       // towards id + 1 (unused at the gateway)
  LinkStats down;     // towards id - 1 (unused at UAV 1)
  LinkStats beacon_air;
  LinkStats ground_data;
  LinkStats beacon_ground;
  /// Unconditional per-slot success of a ground transmission.
  double ground_slot_success = 0.0;
};

/// Cross-layer operating point of a fleet: contact, coverage, DCF fixed
/// points and per-link attempt/service moments.
struct LinkModel {
  std::vector<std::vector<double>> contact;
  std::vector<UavLink> uavs;
  ClampCounter clamps;
  /// True when some covered count had to be rounded up to an integer
  /// number of contenders.
  bool contenders_rounded = false;

  std::vector<double> air_attempts() const;
};

/// Optional replacements for derived operating-point quantities, one entry
/// per UAV; an empty vector leaves the derived values alone. Used to pin
/// degenerate scenarios (deterministic success, certain coverage).
struct LinkOverrides {
  std::vector<double> air_attempt;
  std::vector<double> ground_attempt;
  std::vector<double> coverage;
  std::vector<double> source_rate;

  bool empty() const {
    return air_attempt.empty() && ground_attempt.empty() && coverage.empty() && source_rate.empty();
  }
};

LinkModel build_link_model(const FleetConfig& fleet);
LinkModel build_link_model(const FleetConfig& fleet, const LinkOverrides& overrides);

/// Recomputes the per-link success and service statistics after the attempt
/// probabilities in `model` were overridden.
void refresh_link_stats(LinkModel& model, const FleetConfig& fleet);

}  // namespace fmdn
