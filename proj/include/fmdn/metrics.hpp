#pragma once

#include <cstddef>
#include <vector>

#include "fmdn/link_model.hpp"
#include "fmdn/steady_state.hpp"
#include "fmdn/topology.hpp"

namespace fmdn {

/// End-to-end figures per stream, indexed by source (uplink) or destination
/// (downlink) UAV. Delays of routes crossing an unstable queue are +inf.
struct StreamMetrics {
  std::vector<double> theta_up;
  std::vector<double> theta_down;
  std::vector<double> delay_up;    // slots
  std::vector<double> delay_down;  // slots
  std::vector<double> residual_air;
  std::vector<double> residual_ground;
};

/// Mean residual service seen by a random arrival for a service time with
/// moments (tau, tau2) counted in whole slots.
double residual_time(double tau, double tau2);

/// Class-weighted residual on the air channel of UAV `i`.
double residual_time_air(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                         const LinkModel& model);
double residual_time_ground(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                            const LinkModel& model);

/// Sojourn of a packet in one queue, slots. Throw InstabilityError when the
/// waiting-time denominator is not positive.
double hop_delay_up(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                    const LinkModel& model);
double hop_delay_down_air(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                          const LinkModel& model);
double hop_delay_down_ground(std::size_t i, const SteadyState& st, const FleetConfig& fleet,
                             const LinkModel& model);

/// Packets per slot of stream `s` delivered to the cloud.
double e2e_throughput_up(std::size_t s, const SteadyState& st, const FleetConfig& fleet);
/// Packets per slot delivered to one device covered by UAV `d`.
double e2e_throughput_down(std::size_t d, const SteadyState& st, const FleetConfig& fleet,
                           const LinkModel& model);

double e2e_delay_up(std::size_t s, const SteadyState& st, const FleetConfig& fleet,
                    const LinkModel& model);
double e2e_delay_down(std::size_t d, const SteadyState& st, const FleetConfig& fleet,
                      const LinkModel& model);

StreamMetrics compute_metrics(const SteadyState& st, const FleetConfig& fleet,
                              const LinkModel& model);

}  // namespace fmdn
