#include "fmdn/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fmdn/errors.hpp"

namespace fmdn {

namespace {

const UavTraffic& traffic(const FleetConfig& fleet, std::size_t i) {
  return fleet.traffic.per_uav[i];
}

/// The gateway's air channel carries only downlink and beacons.
double up_share(const FleetConfig& fleet, std::size_t i) {
  return i == fleet.gateway() ? 0.0 : traffic(fleet, i).up_air;
}

/// Departure rate per unit head-of-line probability. Every cycle removes its
/// packet from the queue, delivered or dropped; contact enters through the
/// per-attempt success and hence through the cycle length and delivery.
double uplink_service_coeff(std::size_t i, double cycle_air, const FleetConfig& fleet,
                            const LinkModel& model) {
  if (i == fleet.gateway()) return 1.0;
  return up_share(fleet, i) * model.uavs[i].air.attempt / cycle_air;
}

double downlink_service_coeff(std::size_t i, double cycle_air, const FleetConfig& fleet,
                              const LinkModel& model) {
  if (i == 0) return 0.0;
  return traffic(fleet, i).down_air * model.uavs[i].air.attempt / cycle_air;
}

struct BlockSolution {
  Eigen::VectorXd x;
  std::vector<double> unclamped_load;  // per queue block
};

/// Forward substitution over a lower-triangular system whose rows are grouped
/// by queue. After each block the queue's total load is capped at 1 by
/// proportional scaling, so downstream rows see the throttled departures.
BlockSolution solve_blocks(const LinearSystem& sys, std::size_t queues) {
  const auto n = static_cast<Eigen::Index>(sys.streams.size());
  BlockSolution out{Eigen::VectorXd::Zero(n), std::vector<double>(queues, 0.0)};
  Eigen::Index r = 0;
  while (r < n) {
    const std::size_t queue = sys.streams[static_cast<std::size_t>(r)].first;
    Eigen::Index end = r;
    while (end < n && sys.streams[static_cast<std::size_t>(end)].first == queue) ++end;
    double total = 0.0;
    for (Eigen::Index row = r; row < end; ++row) {
      double acc = sys.rhs(row);
      for (Eigen::Index col = 0; col < r; ++col) acc -= sys.matrix(row, col) * out.x(col);
      const double diag = sys.matrix(row, row);
      if (diag == 0.0) {
        if (acc > 0.0) {
          std::ostringstream msg;
          msg << "singular rate-balance row " << row << " (queue UAV " << queue + 1
              << ", stream " << sys.streams[static_cast<std::size_t>(row)].second + 1
              << "): no service capacity but demand " << acc;
          throw NumericalError(msg.str(), {msg.str()});
        }
        out.x(row) = 0.0;
      } else {
        out.x(row) = std::max(acc, 0.0) / diag;
      }
      total += out.x(row);
    }
    out.unclamped_load[queue] = total;
    if (total > 1.0)
      for (Eigen::Index row = r; row < end; ++row) out.x(row) /= total;
    r = end;
  }
  return out;
}

double ground_load(double arrival, std::size_t i, const FleetConfig& fleet,
                   const LinkModel& model, double* unclamped) {
  // pi f p / (pi f L + 1 - pi f) = a  solved for pi.
  const auto& u = model.uavs[i];
  const double f = traffic(fleet, i).down_ground;
  if (arrival <= 0.0) {
    *unclamped = 0.0;
    return 0.0;
  }
  const double denom = f * (u.ground.attempt - arrival * (u.ground_data.attempts.mean - 1.0));
  if (denom <= 0.0) {
    *unclamped = INFINITY;
    return 1.0;
  }
  *unclamped = arrival / denom;
  return std::min(*unclamped, 1.0);
}

}  // namespace

bool SteadyState::route_up_stable(std::size_t source) const {
  for (std::size_t i = source; i < size(); ++i)
    if (!stable_up[i]) return false;
  return true;
}

bool SteadyState::route_down_stable(std::size_t d) const {
  for (std::size_t i = d + 1; i < size(); ++i)
    if (!stable_down_air[i]) return false;
  return stable_down_ground[d];
}

double cycle_length_air(std::size_t i, const Eigen::MatrixXd& pi_up,
                        const Eigen::MatrixXd& pi_down, const FleetConfig& fleet,
                        const LinkModel& model) {
  const auto& u = model.uavs[i];
  const double up = up_share(fleet, i) * pi_up.row(static_cast<Eigen::Index>(i)).sum();
  double down = 0.0;
  for (std::size_t d = 0; d < i; ++d)
    down += pi_down(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
  down *= traffic(fleet, i).down_air;
  const double beacon = 1.0 - up - down;
  if (beacon < -1e-12)
    throw ConfigError("traffic.per_uav[" + std::to_string(i) + "]",
                      "WFQ shares inconsistent with queue loads (negative beacon share)");
  // Cycle lengths count the sender's own attempt opportunities, so slots
  // spent deferring for lack of contact are included.
  double len = std::max(beacon, 0.0);
  if (up > 0.0) len += up * (i == fleet.gateway() ? 1.0 : u.up.service.mean * u.air.attempt);
  if (down > 0.0) len += down * (i == 0 ? 1.0 : u.down.service.mean * u.air.attempt);
  return len;
}

double cycle_length_ground(std::size_t i, double pi_ground, const FleetConfig& fleet,
                           const LinkModel& model) {
  const double w = pi_ground * traffic(fleet, i).down_ground;
  return w * model.uavs[i].ground_data.attempts.mean + (1.0 - w);
}

double uplink_departure(std::size_t i, std::size_t, double pi, double cycle_air,
                        const FleetConfig& fleet, const LinkModel& model) {
  return pi * uplink_service_coeff(i, cycle_air, fleet, model);
}

double uplink_arrival(std::size_t i, std::size_t s, double upstream_departure,
                      const FleetConfig& fleet, const LinkModel& model) {
  if (s > i) throw DomainError("uplink stream must originate at or below the queue");
  if (i == s) return i == fleet.gateway() ? 0.0 : model.uavs[i].source_rate;
  return upstream_departure * model.uavs[i - 1].up.delivery;
}

double downlink_departure_air(std::size_t i, double pi, double cycle_air,
                              const FleetConfig& fleet, const LinkModel& model) {
  return pi * downlink_service_coeff(i, cycle_air, fleet, model);
}

double downlink_departure_ground(std::size_t i, double pi, double cycle_ground,
                                 const FleetConfig& fleet, const LinkModel& model) {
  if (i == fleet.gateway()) return 0.0;
  const auto& u = model.uavs[i];
  return pi * traffic(fleet, i).down_ground * u.ground.attempt / cycle_ground;
}

double downlink_source_rate(std::size_t d, double gateway_departure, const FleetConfig& fleet) {
  return (fleet.traffic.ack_fraction * gateway_departure + traffic(fleet, d).control_rate) *
         fleet.channel.backhaul_success;
}

double downlink_arrival(std::size_t i, double upstream_departure, const FleetConfig& fleet,
                        const LinkModel& model) {
  if (i >= fleet.gateway()) throw DomainError("the gateway is fed by the cloud");
  return upstream_departure * model.uavs[i + 1].down.delivery;
}

LinearSystem assemble_uplink_system(const FleetConfig& fleet, const LinkModel& model,
                                    const Eigen::VectorXd& cycle_air) {
  const std::size_t m = fleet.size();
  LinearSystem sys;
  std::vector<std::vector<Eigen::Index>> index(m, std::vector<Eigen::Index>(m, -1));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t s = 0; s <= i && s < fleet.gateway(); ++s) {
      index[i][s] = static_cast<Eigen::Index>(sys.streams.size());
      sys.streams.emplace_back(i, s);
    }
  const auto n = static_cast<Eigen::Index>(sys.streams.size());
  sys.matrix = Eigen::MatrixXd::Zero(n, n);
  sys.rhs = Eigen::VectorXd::Zero(n);
  for (const auto& [i, s] : sys.streams) {
    const Eigen::Index row = index[i][s];
    sys.matrix(row, row) = uplink_service_coeff(i, cycle_air(static_cast<Eigen::Index>(i)), fleet, model);
    if (s == i) {
      sys.rhs(row) = uplink_arrival(i, s, 0.0, fleet, model);
    } else {
      const double upstream =
          uplink_service_coeff(i - 1, cycle_air(static_cast<Eigen::Index>(i - 1)), fleet, model);
      sys.matrix(row, index[i - 1][s]) = -upstream * model.uavs[i - 1].up.delivery;
    }
  }
  return sys;
}

LinearSystem assemble_downlink_system(const FleetConfig& fleet, const LinkModel& model,
                                      const Eigen::VectorXd& cycle_air,
                                      const Eigen::VectorXd& cloud_rates) {
  const std::size_t m = fleet.size();
  const std::size_t g = fleet.gateway();
  LinearSystem sys;
  std::vector<std::vector<Eigen::Index>> index(m, std::vector<Eigen::Index>(m, -1));
  for (std::size_t i = g; i >= 1; --i)
    for (std::size_t d = 0; d < i; ++d) {
      index[i][d] = static_cast<Eigen::Index>(sys.streams.size());
      sys.streams.emplace_back(i, d);
    }
  const auto n = static_cast<Eigen::Index>(sys.streams.size());
  sys.matrix = Eigen::MatrixXd::Zero(n, n);
  sys.rhs = Eigen::VectorXd::Zero(n);
  for (const auto& [i, d] : sys.streams) {
    const Eigen::Index row = index[i][d];
    sys.matrix(row, row) =
        downlink_service_coeff(i, cycle_air(static_cast<Eigen::Index>(i)), fleet, model);
    if (i == g) {
      sys.rhs(row) = cloud_rates(static_cast<Eigen::Index>(d));
    } else {
      const double upstream =
          downlink_service_coeff(i + 1, cycle_air(static_cast<Eigen::Index>(i + 1)), fleet, model);
      sys.matrix(row, index[i + 1][d]) = -upstream * model.uavs[i + 1].down.delivery;
    }
  }
  return sys;
}

SteadyState solve_steady_state(const FleetConfig& fleet, const SolverOptions& opts) {
  return solve_steady_state(fleet, build_link_model(fleet), opts);
}

SteadyState solve_steady_state(const FleetConfig& fleet, const LinkModel& model,
                               const SolverOptions& opts) {
  const std::size_t m = fleet.size();
  const std::size_t g = fleet.gateway();
  const auto em = static_cast<Eigen::Index>(m);

  SteadyState st;
  st.pi_up = Eigen::MatrixXd::Zero(em, em);
  st.pi_down = Eigen::MatrixXd::Zero(em, em);

  auto cycles = [&](const Eigen::MatrixXd& up, const Eigen::MatrixXd& down) {
    Eigen::VectorXd c(em);
    for (std::size_t i = 0; i < m; ++i)
      c(static_cast<Eigen::Index>(i)) = cycle_length_air(i, up, down, fleet, model);
    return c;
  };

  // One sweep of the rate-balance map for frozen cycle lengths.
  auto sweep = [&](const Eigen::MatrixXd& up, const Eigen::MatrixXd& down, Eigen::MatrixXd& new_up,
                   Eigen::MatrixXd& new_down, std::vector<double>& load_up,
                   std::vector<double>& load_down) {
    const Eigen::VectorXd cyc = cycles(up, down);
    const LinearSystem us = assemble_uplink_system(fleet, model, cyc);
    const BlockSolution ux = solve_blocks(us, m);
    new_up.setZero();
    for (std::size_t r = 0; r < us.streams.size(); ++r) {
      const auto [i, s] = us.streams[r];
      new_up(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) =
          ux.x(static_cast<Eigen::Index>(r));
    }
    load_up = ux.unclamped_load;

    Eigen::VectorXd cloud(em);
    cloud.setZero();
    for (std::size_t d = 0; d < g; ++d)
      cloud(static_cast<Eigen::Index>(d)) =
          downlink_source_rate(d, new_up(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(d)), fleet);
    const LinearSystem ds = assemble_downlink_system(fleet, model, cyc, cloud);
    const BlockSolution dx = solve_blocks(ds, m);
    new_down.setZero();
    for (std::size_t r = 0; r < ds.streams.size(); ++r) {
      const auto [i, d] = ds.streams[r];
      new_down(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          dx.x(static_cast<Eigen::Index>(r));
    }
    load_down = dx.unclamped_load;
  };

  Eigen::MatrixXd next_up(em, em), next_down(em, em);
  std::vector<double> load_up, load_down;
  bool converged = false;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    sweep(st.pi_up, st.pi_down, next_up, next_down, load_up, load_down);
    const double delta = std::max((next_up - st.pi_up).cwiseAbs().maxCoeff(),
                                  (next_down - st.pi_down).cwiseAbs().maxCoeff());
    st.pi_up += (1.0 - opts.damping) * (next_up - st.pi_up);
    st.pi_down += (1.0 - opts.damping) * (next_down - st.pi_down);
    st.iterations = it;
    st.final_delta = delta;
    st.delta_trace.push_back(delta);
    if (delta < opts.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::vector<std::string> trace;
    const std::size_t from = st.delta_trace.size() > 20 ? st.delta_trace.size() - 20 : 0;
    for (std::size_t k = from; k < st.delta_trace.size(); ++k) {
      std::ostringstream os;
      os << "iteration " << k + 1 << ": max |delta pi| = " << st.delta_trace[k];
      trace.push_back(os.str());
    }
    throw NumericalError("rate-balance fixed point did not converge", std::move(trace));
  }

  // Final evaluation at the fixed point.
  sweep(st.pi_up, st.pi_down, next_up, next_down, load_up, load_down);
  st.cycle_air = cycles(st.pi_up, st.pi_down);
  st.cycle_ground = Eigen::VectorXd::Ones(em);
  st.arrival_up = Eigen::MatrixXd::Zero(em, em);
  st.departure_up = Eigen::MatrixXd::Zero(em, em);
  st.arrival_down = Eigen::MatrixXd::Zero(em, em);
  st.departure_down = Eigen::MatrixXd::Zero(em, em);
  st.stable_up.assign(m, true);
  st.stable_down_air.assign(m, true);
  st.stable_down_ground.assign(m, true);

  auto I = [](std::size_t k) { return static_cast<Eigen::Index>(k); };
  for (std::size_t i = 0; i < m; ++i) {
    st.stable_up[i] = load_up[i] <= 1.0;
    st.stable_down_air[i] = load_down[i] <= 1.0;
    for (std::size_t s = 0; s <= i && s < g; ++s) {
      const double upstream = s < i ? st.departure_up(I(i - 1), I(s)) : 0.0;
      st.arrival_up(I(i), I(s)) = uplink_arrival(i, s, upstream, fleet, model);
      st.departure_up(I(i), I(s)) =
          uplink_departure(i, s, st.pi_up(I(i), I(s)), st.cycle_air(I(i)), fleet, model);
    }
  }
  for (std::size_t i = g; i >= 1; --i)
    for (std::size_t d = 0; d < i; ++d) {
      st.arrival_down(I(i), I(d)) =
          i == g ? downlink_source_rate(d, st.departure_up(I(g), I(d)), fleet)
                 : downlink_arrival(i, st.departure_down(I(i + 1), I(d)), fleet, model);
      st.departure_down(I(i), I(d)) =
          downlink_departure_air(i, st.pi_down(I(i), I(d)), st.cycle_air(I(i)), fleet, model);
    }
  for (std::size_t d = 0; d < g; ++d) {
    const double a = downlink_arrival(d, st.departure_down(I(d + 1), I(d)), fleet, model);
    double unclamped = 0.0;
    const double pi = ground_load(a, d, fleet, model, &unclamped);
    st.pi_down(I(d), I(d)) = pi;
    st.stable_down_ground[d] = unclamped <= 1.0;
    st.cycle_ground(I(d)) = cycle_length_ground(d, pi, fleet, model);
    st.arrival_down(I(d), I(d)) = a;
    st.departure_down(I(d), I(d)) =
        downlink_departure_ground(d, pi, st.cycle_ground(I(d)), fleet, model);
  }

  st.queue_load_up = st.pi_up.rowwise().sum();
  st.queue_load_ground = st.pi_down.diagonal();
  st.queue_load_down = st.pi_down.rowwise().sum() - st.queue_load_ground;

  double residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (Eigen::Index s = 0; s < em; ++s) {
      if (st.stable_up[i])
        residual = std::max(residual, std::abs(st.arrival_up(I(i), s) - st.departure_up(I(i), s)));
      const bool ground = s == I(i);
      const bool stable = ground ? st.stable_down_ground[i] : st.stable_down_air[i];
      if (stable)
        residual = std::max(residual, std::abs(st.arrival_down(I(i), s) - st.departure_down(I(i), s)));
    }
  }
  st.max_residual = residual;
  return st;
}

}  // namespace fmdn
