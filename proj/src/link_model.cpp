#include "fmdn/link_model.hpp"

#include <cmath>
#include <string>

#include "fmdn/errors.hpp"

namespace fmdn {

std::vector<double> LinkModel::air_attempts() const {
  std::vector<double> p;
  p.reserve(uavs.size());
  for (const auto& u : uavs) p.push_back(u.air.attempt);
  return p;
}

LinkModel build_link_model(const FleetConfig& fleet) {
  fleet.validate();
  LinkModel model;
  const std::size_t m = fleet.size();
  const std::size_t gw = fleet.gateway();
  model.contact = contact_matrix(fleet);
  model.uavs.resize(m);

  for (std::size_t i = 0; i < m; ++i) {
    auto& u = model.uavs[i];
    const int neighbours = (i > 0 ? 1 : 0) + (i + 1 < m ? 1 : 0);
    u.air = dcf_fixed_point(neighbours + 1, fleet.mac);
    if (i == gw) continue;

    const UavParams& uav = fleet.uavs[i];
    u.covered = covered_count(uav, fleet.device_density);
    u.ground_contenders = contender_count(u.covered);
    if (std::abs(u.covered - std::round(u.covered)) > 1e-12) model.contenders_rounded = true;
    u.coverage = coverage_probability(uav.altitude_m, uav.aperture_rad, fleet.device_density,
                                      fleet.channel, &model.clamps)
                     .probability;
    u.ground = dcf_fixed_point(u.ground_contenders, fleet.mac);
    u.saturation = saturation_throughput(u.covered, fleet.mac, u.coverage, u.ground.attempt);
    u.source_rate = u.covered * u.saturation * u.coverage / (u.covered + 1.0);
  }
  refresh_link_stats(model, fleet);
  return model;
}

LinkModel build_link_model(const FleetConfig& fleet, const LinkOverrides& overrides) {
  LinkModel model = build_link_model(fleet);
  if (overrides.empty()) return model;
  const std::size_t m = fleet.size();
  auto apply = [&](const std::vector<double>& values, const char* name, auto&& set) {
    if (values.empty()) return;
    if (values.size() != m)
      throw ConfigError(std::string("overrides.") + name, "needs one value per UAV");
    for (std::size_t i = 0; i < m; ++i) {
      if (!(values[i] >= 0.0 && values[i] <= 1.0) && std::string(name) != "source_rate")
        throw ConfigError(std::string("overrides.") + name, "values must lie in [0, 1]");
      if (!(values[i] >= 0.0))
        throw ConfigError(std::string("overrides.") + name, "values must be >= 0");
      set(model.uavs[i], values[i]);
    }
  };
  apply(overrides.air_attempt, "air_attempt", [](UavLink& u, double v) { u.air.attempt = v; });
  apply(overrides.ground_attempt, "ground_attempt", [](UavLink& u, double v) { u.ground.attempt = v; });
  apply(overrides.coverage, "coverage", [](UavLink& u, double v) { u.coverage = v; });
  apply(overrides.source_rate, "source_rate", [](UavLink& u, double v) { u.source_rate = v; });
  model.uavs.back().coverage = 0.0;
  model.uavs.back().source_rate = 0.0;
  refresh_link_stats(model, fleet);
  return model;
}

void refresh_link_stats(LinkModel& model, const FleetConfig& fleet) {
  const std::size_t m = model.uavs.size();
  const std::size_t gw = m - 1;
  const int k = fleet.mac.max_attempts;
  const std::vector<double> p = model.air_attempts();
  for (std::size_t i = 0; i < m; ++i) {
    auto& u = model.uavs[i];
    const double pa = u.air.attempt;
    if (pa <= 0.0) {
      // A silent node never completes a cycle; keep the moments finite.
      u.up = u.down = u.beacon_air = LinkStats{};
    } else {
      if (i + 1 < m)
        u.up = make_air_link_stats(pa, model.contact[i][i + 1],
                                   air_success_in_contact(i, i + 1, p, model.contact), k);
      if (i > 0)
        u.down = make_air_link_stats(pa, model.contact[i][i - 1],
                                     air_success_in_contact(i, i - 1, p, model.contact), k);
      // A beacon is broadcast once, whatever the outcome.
      u.beacon_air = make_link_stats(pa, 1.0, 1);
    }
    if (i == gw || u.ground.attempt <= 0.0) continue;
    const double x = u.ground.attempt * u.coverage;
    const double per_attempt = u.coverage * std::pow(1.0 - x, u.ground_contenders - 1);
    u.ground_slot_success = ground_success(u.covered, u.ground.attempt, u.coverage);
    u.ground_data = make_link_stats(u.ground.attempt, per_attempt, k);
    u.beacon_ground = make_link_stats(u.ground.attempt, 1.0, 1);
  }
}

}  // namespace fmdn
