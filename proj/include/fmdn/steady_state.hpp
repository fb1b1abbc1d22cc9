#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fmdn/link_model.hpp"
#include "fmdn/topology.hpp"

namespace fmdn {

/// Head-of-line probabilities and rates at the rate-balance fixed point.
///
/// Matrices are indexed [queue UAV][stream], 0-based. Uplink stream s is the
/// traffic from UAV s's devices to the cloud; downlink stream d is the
/// traffic from the cloud to UAV d's devices. The downlink of a UAV holds
/// two FIFO sub-queues: air-bound packets (streams d < i) and ground-bound
/// packets (its own stream, stored on the diagonal).
struct SteadyState {
  Eigen::MatrixXd pi_up;         // pi^U_{i,s}, s <= i
  Eigen::MatrixXd pi_down;       // pi^D_{i,d}, d < i air, d == i ground
  Eigen::VectorXd queue_load_up;
  Eigen::VectorXd queue_load_down;    // air-bound sub-queue
  Eigen::VectorXd queue_load_ground;  // ground-bound sub-queue (0 at the gateway)
  Eigen::VectorXd cycle_air;     // mean air cycle, attempts
  Eigen::VectorXd cycle_ground;  // mean ground cycle, attempts
  Eigen::MatrixXd arrival_up, departure_up;
  Eigen::MatrixXd arrival_down, departure_down;

  std::vector<bool> stable_up;
  std::vector<bool> stable_down_air;
  std::vector<bool> stable_down_ground;

  int iterations = 0;
  double final_delta = 0.0;
  double max_residual = 0.0;
  std::vector<double> delta_trace;

  std::size_t size() const { return static_cast<std::size_t>(pi_up.rows()); }
  bool route_up_stable(std::size_t source) const;
  bool route_down_stable(std::size_t destination) const;
};

struct SolverOptions {
  double damping = 0.5;
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

/// Air-channel cycle length of UAV `i` in attempts.
double cycle_length_air(std::size_t i, const Eigen::MatrixXd& pi_up,
                        const Eigen::MatrixXd& pi_down, const FleetConfig& fleet,
                        const LinkModel& model);

/// Ground-channel cycle length of UAV `i` (one aggregated downlink class).
double cycle_length_ground(std::size_t i, double pi_ground, const FleetConfig& fleet,
                           const LinkModel& model);

double uplink_departure(std::size_t i, std::size_t s, double pi, double cycle_air,
                        const FleetConfig& fleet, const LinkModel& model);

/// Arrival rate of stream `s` into the uplink queue of `i`. For relays it is
/// the upstream departure rate of the same stream times the hop delivery
/// probability.
double uplink_arrival(std::size_t i, std::size_t s, double upstream_departure,
                      const FleetConfig& fleet, const LinkModel& model);

double downlink_departure_air(std::size_t i, double pi, double cycle_air,
                              const FleetConfig& fleet, const LinkModel& model);
double downlink_departure_ground(std::size_t i, double pi, double cycle_ground,
                                 const FleetConfig& fleet, const LinkModel& model);

/// Rate at which the cloud injects stream `d` into the gateway downlink,
/// given the gateway's uplink departure rate for the same stream.
double downlink_source_rate(std::size_t d, double gateway_departure, const FleetConfig& fleet);

/// Arrival rate of downlink stream `d` into UAV `i` (i < gateway), given the
/// departure rate of that stream from UAV i + 1.
double downlink_arrival(std::size_t i, double upstream_departure, const FleetConfig& fleet,
                        const LinkModel& model);

/// The uplink rate-balance system for frozen cycle lengths, in the
/// stream ordering (0,0), (1,0), (1,1), (2,0)... Row r reads
/// c_i pi_{i,s} - c_{i-1} h_{i-1} pi_{i-1,s} = source rate if s == i.
struct LinearSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::vector<std::pair<std::size_t, std::size_t>> streams;  // (queue, stream)
};

LinearSystem assemble_uplink_system(const FleetConfig& fleet, const LinkModel& model,
                                    const Eigen::VectorXd& cycle_air);

/// Downlink air system, streams ordered (g, 0), (g, 1)... (g-1, 0)...
LinearSystem assemble_downlink_system(const FleetConfig& fleet, const LinkModel& model,
                                      const Eigen::VectorXd& cycle_air,
                                      const Eigen::VectorXd& cloud_rates);

SteadyState solve_steady_state(const FleetConfig& fleet, const LinkModel& model,
                               const SolverOptions& opts = {});
SteadyState solve_steady_state(const FleetConfig& fleet, const SolverOptions& opts = {});

}  // namespace fmdn
