#include <cmath>

#include <doctest.h>

#include "fmdn/analysis.hpp"
#include "fmdn/errors.hpp"
#include "fmdn/steady_state.hpp"
#include "support.hpp"

using namespace fmdn;

namespace {

Eigen::Index I(std::size_t k) { return static_cast<Eigen::Index>(k); }

}  // namespace

TEST_CASE("defaults converge to a stable fixed point") {
  const FleetConfig f = reference_fleet();
  const SteadyState st = solve_steady_state(f);
  CHECK(st.iterations < 1000);
  CHECK(st.max_residual < 1e-10);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(st.stable_up[i]);
    CHECK(st.stable_down_air[i]);
    CHECK(st.queue_load_up(I(i)) < 1.0);
    CHECK(st.queue_load_down(I(i)) < 1.0);
    CHECK(st.cycle_air(I(i)) >= 1.0);
  }
  // UAV 1 never forwards on the air downlink.
  CHECK(st.queue_load_down(0) == 0.0);
  // The gateway covers no ground, so has no ground sub-queue.
  CHECK(st.queue_load_ground(I(f.gateway())) == 0.0);
}

TEST_CASE("dense Eigen solve of the frozen systems matches the solver") {
  const FleetConfig f = reference_fleet();
  const LinkModel model = build_link_model(f);
  const SteadyState st = solve_steady_state(f, model);

  const LinearSystem up = assemble_uplink_system(f, model, st.cycle_air);
  const Eigen::VectorXd x = up.matrix.colPivHouseholderQr().solve(up.rhs);
  for (std::size_t r = 0; r < up.streams.size(); ++r) {
    const auto [i, s] = up.streams[r];
    CHECK(x(I(r)) == doctest::Approx(st.pi_up(I(i), I(s))).epsilon(1e-9));
  }

  Eigen::VectorXd cloud = Eigen::VectorXd::Zero(I(f.size()));
  for (std::size_t d = 0; d < f.gateway(); ++d)
    cloud(I(d)) = downlink_source_rate(d, st.departure_up(I(f.gateway()), I(d)), f);
  const LinearSystem down = assemble_downlink_system(f, model, st.cycle_air, cloud);
  const Eigen::VectorXd y = down.matrix.colPivHouseholderQr().solve(down.rhs);
  for (std::size_t r = 0; r < down.streams.size(); ++r) {
    const auto [i, d] = down.streams[r];
    CHECK(y(I(r)) == doctest::Approx(st.pi_down(I(i), I(d))).epsilon(1e-9));
  }
}

TEST_CASE("single relay matches the closed form") {
  const FleetConfig f = test::single_relay();
  const LinkModel model = build_link_model(f);
  const SteadyState st = solve_steady_state(f, model);
  // pi f p / (1 - pi f + pi f L/xi) = a  =>  pi = a / (f (p - a (L/xi - 1)))
  const double a = model.uavs[0].source_rate;
  const double fu = f.traffic.per_uav[0].up_air;
  const double p = model.uavs[0].air.attempt;
  const double xi = model.contact[0][1];
  const double success = 1.0 - model.uavs[1].air.attempt;  // the gateway is the only neighbour
  const double L = attempts_per_packet(success, f.mac.max_attempts).mean;
  const double expected = a / (fu * (p - a * (L / xi - 1.0)));
  CHECK(st.queue_load_up(0) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(st.departure_up(0, 0) == doctest::Approx(a).epsilon(1e-10));
}

TEST_CASE("rate balance holds on every stable queue") {
  const FleetConfig f = reference_fleet();
  const SteadyState st = solve_steady_state(f);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t s = 0; s <= i && s < f.gateway(); ++s)
      CHECK(st.departure_up(I(i), I(s)) == doctest::Approx(st.arrival_up(I(i), I(s))).epsilon(1e-9));
  // Relay arrivals are upstream departures thinned by hop delivery.
  const LinkModel model = build_link_model(f);
  CHECK(st.arrival_up(2, 0) ==
        doctest::Approx(st.departure_up(1, 0) * model.uavs[1].up.delivery).epsilon(1e-12));
}

TEST_CASE("ground queue closed form") {
  const FleetConfig f = reference_fleet();
  const LinkModel model = build_link_model(f);
  const SteadyState st = solve_steady_state(f, model);
  for (std::size_t d = 0; d < f.gateway(); ++d) {
    const auto& u = model.uavs[d];
    const double a = st.arrival_down(I(d), I(d));
    const double fg = f.traffic.per_uav[d].down_ground;
    const double pi = a / (fg * (u.ground.attempt - a * (u.ground_data.attempts.mean - 1.0)));
    CHECK(st.queue_load_ground(I(d)) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(st.departure_down(I(d), I(d)) == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("no devices means no traffic") {
  FleetConfig f = reference_fleet();
  f.device_density = 0.0;
  const SteadyState st = solve_steady_state(f);
  CHECK(st.queue_load_up.cwiseAbs().maxCoeff() == 0.0);
  CHECK(st.queue_load_down.cwiseAbs().maxCoeff() == 0.0);
  CHECK(st.queue_load_ground.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("overloaded relays are clamped and flagged") {
  const FleetConfig f = test::with_up_share(0.1);
  const SteadyState st = solve_steady_state(f);
  bool any = false;
  for (std::size_t i = 0; i < f.gateway(); ++i) {
    CHECK(st.queue_load_up(I(i)) <= 1.0 + 1e-12);
    if (!st.stable_up[i]) {
      any = true;
      CHECK(st.queue_load_up(I(i)) == doctest::Approx(1.0));
    }
  }
  CHECK(any);
  CHECK_FALSE(st.route_up_stable(0));
}

TEST_CASE("a relay that never meets its next hop is a numerical error") {
  FleetConfig f = reference_fleet();
  f.tx_range_m = 15.0;
  f.uavs.back().velocity_mps = 400.0;  // gateway radius 50 m, far outside range
  try {
    solve_steady_state(f);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("queue UAV 4") != std::string::npos);
    CHECK_FALSE(e.diagnostics().empty());
  }
}

TEST_CASE("non-convergence reports the delta trace") {
  SolverOptions opts;
  opts.max_iterations = 3;
  opts.tolerance = 0.0;
  try {
    solve_steady_state(reference_fleet(), opts);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.diagnostics().size() == 3);
  }
}

TEST_CASE("loads grow towards the gateway") {
  const SteadyState st = solve_steady_state(reference_fleet());
  for (std::size_t i = 1; i < 4; ++i) CHECK(st.queue_load_up(I(i)) >= st.queue_load_up(I(i - 1)));
}

TEST_CASE("cycle length counts attempt opportunities") {
  const FleetConfig f = reference_fleet();
  const LinkModel model = build_link_model(f);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(5, 5);
  CHECK(cycle_length_air(2, zero, zero, f, model) == 1.0);
  Eigen::MatrixXd up = zero;
  up(2, 0) = 1.0;
  const double expected = (1.0 - f.traffic.per_uav[2].up_air) +
                          f.traffic.per_uav[2].up_air * model.uavs[2].up.attempts.mean / model.contact[2][3];
  CHECK(cycle_length_air(2, up, zero, f, model) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(cycle_length_ground(0, 0.0, f, model) == 1.0);
}
