#pragma once

#include <cstddef>
#include <vector>

#include "fmdn/params.hpp"

namespace fmdn {

/// One UAV flying a circular trajectory around the common centre.
struct UavParams {
  int id = 1;                    // 1-based; the gateway has the largest id
  double altitude_m = 20.0;      // h
  double aperture_rad = 1.5707963267948966;  // theta, antenna beamwidth
  double velocity_mps = 20.0;    // V
  double angular_velocity = 8.0; // omega, rad/s
  bool is_gateway = false;

  double rotation_radius() const { return velocity_mps / angular_velocity; }
};

struct FleetConfig {
  std::vector<UavParams> uavs;
  double device_density = 5e-4;  // devices per m^2
  double tx_range_m = 15.0;      // air-to-air range d_tx
  ChannelParams channel;
  MacParams mac;
  TrafficConfig traffic;

  std::size_t size() const { return uavs.size(); }
  /// 0-based index of the gateway (always the last UAV).
  std::size_t gateway() const { return uavs.size() - 1; }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// The four homogeneous UAVs plus gateway scenario with the reference
/// PHY/MAC constants.
FleetConfig reference_fleet();

double coverage_radius(const UavParams& u);

/// Expected number of ground devices under the footprint at one stop.
double covered_count(const UavParams& u, double density);

/// Devices swept during one revolution. Throws DomainError for the gateway.
double covered_per_roundtrip(const UavParams& u, double density);

/// Long-run fraction of time two concentric circular trajectories are
/// within `tx_range` of each other, assuming a uniform relative phase.
double contact_probability(double radius_i, double radius_j, double tx_range);
double contact_probability(const UavParams& i, const UavParams& j, double tx_range);

/// Pairwise contact probabilities for the fleet, indexed [i][j] (0-based).
std::vector<std::vector<double>> contact_matrix(const FleetConfig& fleet);

}  // namespace fmdn
