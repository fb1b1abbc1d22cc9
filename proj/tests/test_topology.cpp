#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "fmdn/errors.hpp"
#include "fmdn/topology.hpp"
#include "oracles.hpp"

using namespace fmdn;

TEST_CASE("contact probability matches a uniform-phase Monte Carlo") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> radius(1.0, 40.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  constexpr int kSamples = 1'000'000;
  for (int trial = 0; trial < 10; ++trial) {
    const double ri = radius(rng), rj = radius(rng);
    // Keep the range inside the interesting band between |ri - rj| and ri + rj.
    const double lo = std::abs(ri - rj), hi = ri + rj;
    const double d = lo + (0.1 + 0.8 * frac(rng)) * (hi - lo);
    const double xi = contact_probability(ri, rj, d);
    const double mc = test::contact_monte_carlo(ri, rj, d, kSamples, rng);
    const double se = std::sqrt(xi * (1.0 - xi) / kSamples);
    INFO("ri=" << ri << " rj=" << rj << " d=" << d << " xi=" << xi << " mc=" << mc);
    CHECK(std::abs(xi - mc) <= 3.0 * se);
  }
}

TEST_CASE("contact probability limits") {
  CHECK(contact_probability(5.0, 10.0, 20.0) == 1.0);
  CHECK(contact_probability(5.0, 10.0, 15.0) == 1.0);
  CHECK(contact_probability(5.0, 10.0, 4.0) == 0.0);
  // Equal radii, range equal to the radius: in range for |phase| <= pi/3.
  CHECK(contact_probability(10.0, 10.0, 10.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // Symmetric in the two radii.
  CHECK(contact_probability(3.0, 7.0, 6.0) == contact_probability(7.0, 3.0, 6.0));
}

TEST_CASE("contact matrix is symmetric with a zero diagonal") {
  FleetConfig f = reference_fleet();
  for (std::size_t i = 0; i < f.size(); ++i) f.uavs[i].velocity_mps = 20.0 + 10.0 * i;
  const auto xi = contact_matrix(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(xi[i][i] == 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(xi[i][j] == xi[j][i]);
  }
}

TEST_CASE("coverage geometry") {
  UavParams u;
  u.altitude_m = 20.0;
  u.aperture_rad = std::numbers::pi / 2.0;
  CHECK(coverage_radius(u) == doctest::Approx(20.0));
  CHECK(covered_count(u, 5e-4) == doctest::Approx(5e-4 * std::numbers::pi * 400.0));
  // Four footprint radii of travel per revolution: 4 pi r / R_c footprints.
  u.velocity_mps = 20.0;
  u.angular_velocity = 8.0;
  CHECK(covered_per_roundtrip(u, 5e-4) ==
        doctest::Approx(4.0 * std::numbers::pi * 2.5 / 20.0 * covered_count(u, 5e-4)));
  u.is_gateway = true;
  CHECK(coverage_radius(u) == 0.0);
  CHECK_THROWS_AS(covered_per_roundtrip(u, 5e-4), DomainError);
}

TEST_CASE("reference fleet: four relays and a gateway") {
  const FleetConfig f = reference_fleet();
  REQUIRE(f.size() == 5);
  CHECK(f.gateway() == 4);
  CHECK(f.uavs.back().is_gateway);
  CHECK_NOTHROW(f.validate());
}

TEST_CASE("fleet validation names the violated field") {
  FleetConfig f = reference_fleet();
  f.traffic.per_uav[1].up_air = 0.8;
  f.traffic.per_uav[1].down_air = 0.3;
  try {
    f.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "traffic.per_uav[1].up_air");
    CHECK(std::string(e.what()).find("up_air + down_air must not exceed 1") != std::string::npos);
  }

  f = reference_fleet();
  f.uavs[2].is_gateway = true;
  CHECK_THROWS_AS(f.validate(), ConfigError);

  f = reference_fleet();
  f.uavs[1].altitude_m = 0.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);

  f = reference_fleet();
  f.uavs.resize(1);
  f.uavs[0].is_gateway = true;
  f.traffic.per_uav.resize(1);
  CHECK_THROWS_AS(f.validate(), ConfigError);

  f = reference_fleet();
  f.uavs[3].velocity_mps = 1.0;  // radius shrinks below UAV 3's
  CHECK_THROWS_AS(f.validate(), ConfigError);
}
