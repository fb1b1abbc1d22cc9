#include "fmdn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fmdn/errors.hpp"

namespace fmdn {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void FleetConfig::validate() const {
  require(uavs.size() >= 2, "uavs", "need at least one relay and the gateway");
  for (std::size_t k = 0; k < uavs.size(); ++k) {
    const auto& u = uavs[k];
    const std::string f = "uavs[" + std::to_string(k) + "]";
    require(u.altitude_m > 0.0, f + ".altitude", "must be > 0");
    require(u.aperture_rad > 0.0 && u.aperture_rad < std::numbers::pi, f + ".aperture",
            "must lie in (0, pi)");
    require(u.velocity_mps > 0.0, f + ".velocity", "must be > 0");
    require(u.angular_velocity > 0.0, f + ".angular_velocity", "must be > 0");
    require(u.is_gateway == (k + 1 == uavs.size()), f + ".is_gateway",
            "exactly one gateway, and it must be the last UAV");
    if (k > 0) {
      require(u.id > uavs[k - 1].id, f + ".id", "ids must be strictly increasing");
      require(u.rotation_radius() >= uavs[k - 1].rotation_radius(), f + ".velocity",
              "rotation radii must be non-decreasing with id");
    }
  }
  require(device_density >= 0.0, "device_density", "must be >= 0");
  require(tx_range_m > 0.0, "tx_range", "must be > 0");

  require(unit(channel.backhaul_success), "channel.backhaul_success", "must lie in [0, 1]");
  require(channel.los_sigma_a > 0.0, "channel.los_sigma_a", "must be > 0");
  require(channel.frequency_hz > 0.0, "channel.frequency_hz", "must be > 0");

  require(mac.contention_window >= 1, "mac.contention_window", "must be >= 1");
  require(mac.max_backoff_stage >= 0, "mac.max_backoff_stage", "must be >= 0");
  require(mac.max_attempts >= 1, "mac.max_attempts", "must be >= 1");
  require(mac.payload_bits >= 0.0, "mac.payload_bits", "must be >= 0");
  require(mac.bitrate_bps > 0.0, "mac.bitrate_bps", "must be > 0");
  require(mac.slot_idle_s > 0.0, "mac.slot_idle_s", "must be > 0");
  require(mac.success_time_s > 0.0, "mac.success_time_s", "must be > 0");
  require(mac.collision_time_s > 0.0, "mac.collision_time_s", "must be > 0");

  require(traffic.per_uav.size() == uavs.size(), "traffic.per_uav",
          "need one entry per UAV");
  require(unit(traffic.ack_fraction), "traffic.ack_fraction", "must lie in [0, 1]");
  for (std::size_t k = 0; k < uavs.size(); ++k) {
    const auto& t = traffic.per_uav[k];
    const std::string f = "traffic.per_uav[" + std::to_string(k) + "]";
    require(unit(t.up_air), f + ".up_air", "must lie in [0, 1]");
    require(unit(t.down_air), f + ".down_air", "must lie in [0, 1]");
    require(unit(t.down_ground), f + ".down_ground", "must lie in [0, 1]");
    require(unit(t.control_rate), f + ".control_rate", "must lie in [0, 1]");
    require(t.up_air + t.down_air <= 1.0 + 1e-12, f + ".up_air",
            "up_air + down_air must not exceed 1");
  }
}

FleetConfig reference_fleet() {
  FleetConfig fleet;
  for (int id = 1; id <= 5; ++id) {
    UavParams u;
    u.id = id;
    u.is_gateway = id == 5;
    fleet.uavs.push_back(u);
  }
  fleet.traffic.per_uav.assign(fleet.uavs.size(), UavTraffic{});
  // The gateway has no uplink air traffic; its air cycles carry the downlink.
  auto& gw = fleet.traffic.per_uav.back();
  gw.up_air = 0.0;
  gw.down_air = 0.9;
  gw.down_ground = 0.0;
  return fleet;
}

double coverage_radius(const UavParams& u) {
  if (u.is_gateway) return 0.0;
  return u.altitude_m * std::tan(u.aperture_rad / 2.0);
}

double covered_count(const UavParams& u, double density) {
  const double rc = coverage_radius(u);
  return density * std::numbers::pi * rc * rc;
}

double covered_per_roundtrip(const UavParams& u, double density) {
  if (u.is_gateway) throw DomainError("the gateway covers no ground devices");
  const double r = u.rotation_radius();
  if (!(r > 0.0)) throw DomainError("rotation radius must be positive");
  return 4.0 * std::numbers::pi * r / coverage_radius(u) * covered_count(u, density);
}

double contact_probability(double ri, double rj, double d) {
  if (d >= ri + rj) return 1.0;
  if (d <= std::abs(ri - rj)) return 0.0;
  const double c = (ri * ri + rj * rj - d * d) / (2.0 * ri * rj);
  return std::acos(std::clamp(c, -1.0, 1.0)) / std::numbers::pi;
}

double contact_probability(const UavParams& i, const UavParams& j, double d) {
  return contact_probability(i.rotation_radius(), j.rotation_radius(), d);
}

std::vector<std::vector<double>> contact_matrix(const FleetConfig& fleet) {
  const std::size_t m = fleet.size();
  std::vector<std::vector<double>> xi(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) xi[i][j] = contact_probability(fleet.uavs[i], fleet.uavs[j], fleet.tx_range_m);
  return xi;
}

}  // namespace fmdn
