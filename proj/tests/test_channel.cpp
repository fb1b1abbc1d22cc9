#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "fmdn/channel.hpp"
#include "fmdn/errors.hpp"
#include "fmdn/quadrature.hpp"
#include "oracles.hpp"

using namespace fmdn;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const auto rule = GaussLegendreRule::make(8);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  // Degree 15 is the exactness limit of an 8-point rule.
  const double v = rule.integrate([](double x) { return std::pow(x, 14) + 3.0 * std::pow(x, 3); }, 0.0, 1.0);
  CHECK(v == doctest::Approx(1.0 / 15.0 + 0.75).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature on smooth and peaked integrands") {
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  const auto peak = integrate_adaptive([](double x) { return 1e-3 / (x * x + 1e-6); }, -1.0, 1.0);
  CHECK(peak.value == doctest::Approx(2.0 * std::atan(1000.0)).epsilon(1e-8));
}

TEST_CASE("Q function") {
  CHECK(q_function(0.0) == doctest::Approx(0.5));
  CHECK(q_function(1.6448536269514722) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(q_function(-3.0) + q_function(3.0) == doctest::Approx(1.0));
}

TEST_CASE("LoS probability clamps and rejects out-of-range angles") {
  ChannelParams c;
  ClampCounter clamps;
  CHECK(p_los(0.1, c, &clamps) == 1.0);
  CHECK(clamps.los == 1);
  c.beta1 = 0.5;
  c.beta2 = 1.0;
  CHECK(p_los(0.0, c) == doctest::Approx(0.5 * 5.0 * std::numbers::pi / 12.0));
  CHECK(p_los(kMaxElevation, c) == 0.0);
  CHECK_THROWS_AS(p_los(-0.1, c), DomainError);
  CHECK_THROWS_AS(p_los(1.5, c), DomainError);
}

TEST_CASE("link budget in dB") {
  ChannelParams c;
  const double d = 100.0;
  const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * c.frequency_hz * d / 299792458.0);
  CHECK(link_budget_psi(d, c) == doctest::Approx(20.0 + 150.0 - fspl - 5.0).epsilon(1e-12));
  // Doubling the distance costs 6.02 dB.
  CHECK(link_budget_psi(d, c) - link_budget_psi(2 * d, c) == doctest::Approx(20.0 * std::log10(2.0)));
  CHECK_THROWS_AS(link_budget_psi(0.0, c), DomainError);
}

TEST_CASE("coverage probability matches Monte Carlo integration") {
  ChannelParams c;
  for (double h : {10.0, 20.0, 40.0}) {
    const double analytic = coverage_probability(h, std::numbers::pi / 2.0, 5e-4, c).probability;
    const double mc =
        test::coverage_nearest_device(h, std::numbers::pi / 2.0, 5e-4, c, 1'000'000, 7 + static_cast<std::uint64_t>(h));
    INFO("h=" << h << " analytic=" << analytic << " mc=" << mc);
    CHECK(std::abs(analytic - mc) <= 1e-3);
  }
}

TEST_CASE("coverage probability matches uniform-angle integration") {
  ChannelParams c;
  for (double density : {5e-4, 1e-3}) {
    const double analytic = coverage_probability(20.0, std::numbers::pi / 2.0, density, c).probability;
    const double mc = test::coverage_uniform_angle(20.0, std::numbers::pi / 2.0, density, c, 1'000'000, 11);
    INFO("density=" << density << " analytic=" << analytic << " mc=" << mc);
    CHECK(std::abs(analytic - mc) <= 1e-3);
  }
}

TEST_CASE("coverage probability edge cases") {
  ChannelParams c;
  CHECK(coverage_probability(20.0, 1.0, 0.0, c).probability == 0.0);
  CHECK_THROWS_AS(coverage_probability(0.0, 1.0, 1e-3, c), DomainError);
  CHECK_THROWS_AS(coverage_probability(20.0, std::numbers::pi, 1e-3, c), DomainError);
  // A denser field puts the nearest device closer, so coverage rises.
  const double sparse = coverage_probability(20.0, 1.5, 1e-4, c).probability;
  const double dense = coverage_probability(20.0, 1.5, 1e-2, c).probability;
  CHECK(dense > sparse);
  CHECK(dense <= 1.0);
}
