#pragma once

#include <vector>

namespace fmdn {

/// Air-to-ground propagation and backhaul parameters.
///
/// Powers are in dBm, the SNR threshold in dB. `los_sigma_a` and
/// `los_sigma_b` parameterise the shadowing spread
/// sigma(theta) = a * exp(b * theta).
struct ChannelParams {
  double beta1 = 10.39;
  double beta2 = 0.05;
  double los_sigma_a = 11.95;
  double los_sigma_b = 0.136;
  double los_mean_db = 1.0;
  double tx_power_dbm = 20.0;
  double noise_dbm = -150.0;
  double frequency_hz = 2.4e9;
  double snr_threshold_db = 5.0;
  /// Probability that the gateway's backhaul delivers a packet.
  double backhaul_success = 1.0;
};

/// DCF parameters shared by every node on both channels.
struct MacParams {
  int contention_window = 8;  // W, slots
  int max_backoff_stage = 4;  // b
  int max_attempts = 3;       // K
  double payload_bits = 1184.0;
  double bitrate_bps = 11e6;
  double slot_idle_s = 50e-6;
  double success_time_s = 1713e-6;
  double collision_time_s = 1982e-6;

  double payload_time_s() const { return payload_bits / bitrate_bps; }
};

/// Per-UAV weighted-fair-queuing shares.
///
/// On the air channel a cycle serves the uplink queue with probability
/// `up_air`, the downlink queue with `down_air` and a beacon otherwise.
/// On the ground channel the downlink queue is picked with `down_ground`
/// and a beacon with the complement.
struct UavTraffic {
  double up_air = 0.4;
  double down_air = 0.3;
  double down_ground = 0.5;
  /// Control packets per slot that the cloud addresses to this UAV's region.
  double control_rate = 0.0;

  double beacon_air() const { return 1.0 - up_air - down_air; }
  double beacon_ground() const { return 1.0 - down_ground; }
};

struct TrafficConfig {
  std::vector<UavTraffic> per_uav;  // indexed like FleetConfig::uavs
  /// Acknowledgements generated per uplink packet delivered to the cloud.
  double ack_fraction = 0.7;
};

}  // namespace fmdn
