#include "fmdn/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fmdn/errors.hpp"

namespace fmdn {

namespace {

Eigen::Index I(std::size_t k) { return static_cast<Eigen::Index>(k); }

double air_down_load(std::size_t i, const SteadyState& st) {
  double sum = 0.0;
  for (std::size_t d = 0; d < i; ++d) sum += st.pi_down(I(i), I(d));
  return sum;
}

/// Vacation-style waiting time: the tagged queue is served once every
/// 1/f cycles on average, the other classes taking `tau_other` each.
double waiting_time(std::size_t i, const char* queue, double residual, double share,
                    double tau_own, double tau_other, double arrival) {
  if (share <= 0.0) {
    if (arrival <= 0.0) return residual;
    throw InstabilityError(static_cast<int>(i + 1),
                           std::string(queue) + " queue of UAV " + std::to_string(i + 1) +
                               " has no service share");
  }
  const double others = (1.0 - share) / share;
  const double denom = 1.0 - arrival * (tau_own + others * tau_other);
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << queue << " queue of UAV " << i + 1 << " is saturated (1 - a(tau + n tau') = " << denom
        << ")";
    throw InstabilityError(static_cast<int>(i + 1), msg.str());
  }
  return (residual + others * tau_other) / denom;
}

double mix(double a, double wa, double b, double wb, double fallback) {
  const double w = wa + wb;
  return w > 0.0 ? (a * wa + b * wb) / w : fallback;
}

}  // namespace

double residual_time(double tau, double tau2) {
  if (!(tau > 0.0)) throw DomainError("mean service time must be positive");
  return tau2 / (2.0 * tau) + 0.5;
}

double residual_time_air(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                         const LinkModel& model) {
  const auto& u = model.uavs[i];
  const auto& t = fleet.traffic.per_uav[i];
  const bool gw = i == fleet.gateway();
  const double w_up = gw ? 0.0 : t.up_air * st.pi_up.row(I(i)).sum();
  const double w_down = i == 0 ? 0.0 : t.down_air * air_down_load(i, st);
  const double w_beacon = std::max(1.0 - w_up - w_down, 0.0);
  const auto& b = u.beacon_air.service;
  double r = w_beacon * residual_time(b.mean, b.second);
  if (w_up > 0.0) r += w_up * residual_time(u.up.service.mean, u.up.service.second);
  if (w_down > 0.0) r += w_down * residual_time(u.down.service.mean, u.down.service.second);
  return r;
}

double residual_time_ground(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                            const LinkModel& model) {
  if (i == fleet.gateway()) return 0.0;
  const auto& u = model.uavs[i];
  const double w_data = fleet.traffic.per_uav[i].down_ground * st.pi_down(I(i), I(i));
  const auto& d = u.ground_data.service;
  const auto& b = u.beacon_ground.service;
  return w_data * residual_time(d.mean, d.second) + (1.0 - w_data) * residual_time(b.mean, b.second);
}

double hop_delay_up(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                    const LinkModel& model) {
  // The backhaul drains at most one packet per slot and the gateway receives
  // at most one per slot, so nothing ever waits behind another packet.
  if (i == fleet.gateway()) return residual_time(1.0, 1.0) + 1.0;
  const auto& u = model.uavs[i];
  const auto& t = fleet.traffic.per_uav[i];
  const double tau_b = u.beacon_air.service.mean;
  // A cycle that skips the uplink serves the downlink only if it has a
  // packet; otherwise it falls back to a beacon, as in the cycle length.
  const double down_w = i == 0 ? 0.0 : t.down_air * air_down_load(i, st);
  const double tau_other =
      mix(u.down.service.mean, down_w, tau_b, 1.0 - t.up_air - down_w, tau_b);
  const double arrival = st.arrival_up.row(I(i)).sum();
  const double w = waiting_time(i, "uplink", residual_time_air(i, st, fleet, model), t.up_air,
                                u.up.service.mean, tau_other, arrival);
  return w + u.up.service.mean;
}

double hop_delay_down_air(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                          const LinkModel& model) {
  if (i == 0) throw DomainError("UAV 1 has no air downlink");
  const auto& u = model.uavs[i];
  const auto& t = fleet.traffic.per_uav[i];
  const double tau_b = u.beacon_air.service.mean;
  const double up_w = i == fleet.gateway() ? 0.0 : t.up_air * st.pi_up.row(I(i)).sum();
  const double tau_other = mix(tau_b, 1.0 - t.down_air - up_w, u.up.service.mean, up_w, tau_b);
  double arrival = 0.0;
  for (std::size_t d = 0; d < i; ++d) arrival += st.arrival_down(I(i), I(d));
  const double w = waiting_time(i, "downlink", residual_time_air(i, st, fleet, model), t.down_air,
                                u.down.service.mean, tau_other, arrival);
  return w + u.down.service.mean;
}

double hop_delay_down_ground(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                             const LinkModel& model) {
  if (i == fleet.gateway()) throw DomainError("the gateway has no ground channel");
  const auto& u = model.uavs[i];
  const auto& t = fleet.traffic.per_uav[i];
  const double w = waiting_time(i, "ground downlink", residual_time_ground(i, st, fleet, model),
                                t.down_ground, u.ground_data.service.mean,
                                u.beacon_ground.service.mean, st.arrival_down(I(i), I(i)));
  return w + u.ground_data.service.mean;
}

double e2e_throughput_up(std::size_t s, const SteadyState& st, const FleetConfig& fleet) {
  if (s >= fleet.gateway()) throw DomainError("uplink streams originate at non-gateway UAVs");
  return st.departure_up(I(fleet.gateway()), I(s)) * fleet.channel.backhaul_success;
}

double e2e_throughput_down(std::size_t d, const SteadyState& st, const FleetConfig& fleet,
                           const LinkModel& model) {
  if (d >= fleet.gateway()) throw DomainError("downlink streams end at non-gateway UAVs");
  const auto& u = model.uavs[d];
  return st.arrival_down(I(d), I(d)) / (u.covered + 1.0) * u.ground_data.delivery;
}

double e2e_delay_up(std::size_t s, const SteadyState& st, const FleetConfig& fleet,
                    const LinkModel& model) {
  if (s >= fleet.gateway()) throw DomainError("uplink streams originate at non-gateway UAVs");
  double total = 0.0;
  for (std::size_t i = s; i <= fleet.gateway(); ++i) {
    if (!st.stable_up[i])
      throw InstabilityError(static_cast<int>(i + 1),
                             "uplink queue of UAV " + std::to_string(i + 1) + " is unstable");
    total += hop_delay_up(i, st, fleet, model);
  }
  return total;
}

double e2e_delay_down(std::size_t d, const SteadyState& st, const FleetConfig& fleet,
                      const LinkModel& model) {
  if (d >= fleet.gateway()) throw DomainError("downlink streams end at non-gateway UAVs");
  double total = 0.0;
  for (std::size_t i = fleet.gateway(); i > d; --i) {
    if (!st.stable_down_air[i])
      throw InstabilityError(static_cast<int>(i + 1),
                             "downlink queue of UAV " + std::to_string(i + 1) + " is unstable");
    total += hop_delay_down_air(i, st, fleet, model);
  }
  if (!st.stable_down_ground[d])
    throw InstabilityError(static_cast<int>(d + 1), "ground downlink queue of UAV " +
                                                        std::to_string(d + 1) + " is unstable");
  return total + hop_delay_down_ground(d, st, fleet, model);
}

StreamMetrics compute_metrics(const SteadyState& st, const FleetConfig& fleet,
                              const LinkModel& model) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  StreamMetrics out;
  const std::size_t m = fleet.size();
  const std::size_t g = fleet.gateway();
  for (std::size_t i = 0; i < m; ++i) {
    out.residual_air.push_back(residual_time_air(i, st, fleet, model));
    out.residual_ground.push_back(residual_time_ground(i, st, fleet, model));
  }
  for (std::size_t s = 0; s < g; ++s) {
    out.theta_up.push_back(e2e_throughput_up(s, st, fleet));
    out.theta_down.push_back(e2e_throughput_down(s, st, fleet, model));
    try {
      out.delay_up.push_back(e2e_delay_up(s, st, fleet, model));
    } catch (const InstabilityError&) {
      out.delay_up.push_back(kInf);
    }
    try {
      out.delay_down.push_back(e2e_delay_down(s, st, fleet, model));
    } catch (const InstabilityError&) {
      out.delay_down.push_back(kInf);
    }
  }
  return out;
}

}  // namespace fmdn
