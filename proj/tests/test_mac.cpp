#include <cmath>
#include <tuple>
#include <vector>

#include <doctest.h>

#include "fmdn/errors.hpp"
#include "fmdn/mac.hpp"

using namespace fmdn;

namespace {

/// Distribution of the service time (slots) of a packet whose attempts
/// succeed with probability `s`, at most `k` of them, each preceded by a
/// geometric(p) wait, by dynamic programming over slots.
std::vector<double> service_distribution(double s, int k, double p, int horizon) {
  // state: attempts made so far (packet still pending)
  std::vector<double> pending(static_cast<std::size_t>(k), 0.0), dist(static_cast<std::size_t>(horizon + 1), 0.0);
  pending[0] = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    std::vector<double> next(pending.size(), 0.0);
    for (int a = 0; a < k; ++a) {
      const double mass = pending[static_cast<std::size_t>(a)];
      next[static_cast<std::size_t>(a)] += mass * (1.0 - p);  // no attempt this slot
      const double attempt = mass * p;
      dist[static_cast<std::size_t>(t)] += attempt * s;
      if (a + 1 < k) next[static_cast<std::size_t>(a + 1)] += attempt * (1.0 - s);
      else dist[static_cast<std::size_t>(t)] += attempt * (1.0 - s);  // dropped
    }
    pending = next;
  }
  return dist;
}

}  // namespace

TEST_CASE("attempt probability without collisions is 2/(W+1)") {
  MacParams m;
  CHECK(attempt_probability(0.0, m) == 2.0 / 9.0);
  m.contention_window = 32;
  CHECK(attempt_probability(0.0, m) == 2.0 / 33.0);
}

TEST_CASE("attempt probability is continuous through p_c = 1/2") {
  MacParams m;
  const double mid = attempt_probability(0.5, m);
  CHECK(attempt_probability(0.5 - 1e-9, m) == doctest::Approx(mid).epsilon(1e-7));
  CHECK(attempt_probability(0.5 + 1e-9, m) == doctest::Approx(mid).epsilon(1e-7));
  // Closed form at exactly 1/2: 2 / ((W+1) + p_c W b).
  CHECK(mid == doctest::Approx(2.0 / (9.0 + 0.5 * 8.0 * 4.0)));
  CHECK_THROWS_AS(attempt_probability(1.0, m), DomainError);
}

TEST_CASE("DCF fixed point is self-consistent") {
  MacParams m;
  for (int n : {2, 3, 5, 10}) {
    const auto op = dcf_fixed_point(n, m);
    const double pc = 1.0 - std::pow(1.0 - op.attempt, n - 1);
    CHECK(op.collision == doctest::Approx(pc));
    CHECK(op.attempt == doctest::Approx(attempt_probability(pc, m)).epsilon(1e-8));
  }
  CHECK(dcf_fixed_point(1, m).attempt == 2.0 / 9.0);
  CHECK(dcf_fixed_point(10, m).attempt < dcf_fixed_point(3, m).attempt);
}

TEST_CASE("mean attempts per packet") {
  CHECK(attempts_per_packet(0.5, 3).mean == 1.75);
  CHECK(attempts_per_packet(1.0, 3).mean == 1.0);
  CHECK(attempts_per_packet(0.0, 3).mean == 3.0);
  CHECK(attempts_per_packet(1e-9, 4).mean == doctest::Approx(4.0).epsilon(1e-8));
  // Enumeration oracle for both moments.
  const double p = 0.37;
  const int k = 5;
  double mean = 0.0, second = 0.0, fail = 1.0;
  for (int a = 1; a <= k; ++a) {
    const double prob = a < k ? fail * p : fail;
    mean += a * prob;
    second += a * a * prob;
    fail *= 1.0 - p;
  }
  const auto m = attempts_per_packet(p, k);
  CHECK(m.mean == doctest::Approx(mean).epsilon(1e-14));
  CHECK(m.second == doctest::Approx(second).epsilon(1e-14));
  // Both branches of the implementation agree near the switch-over.
  CHECK(attempts_per_packet(0.999e-3, 3).second ==
        doctest::Approx(attempts_per_packet(1.001e-3, 3).second).epsilon(1e-5));
}

TEST_CASE("service-time moments match the slot-level distribution") {
  for (auto [s, k, p] : {std::tuple{0.6, 3, 0.22}, std::tuple{0.3, 4, 0.5}, std::tuple{1.0, 1, 1.0}}) {
    const auto dist = service_distribution(s, k, p, 4000);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t t = 0; t < dist.size(); ++t) {
      m1 += static_cast<double>(t) * dist[t];
      m2 += static_cast<double>(t * t) * dist[t];
    }
    const auto sm = service_moments(attempts_per_packet(s, k), p);
    CHECK(sm.mean == doctest::Approx(m1).epsilon(1e-10));
    CHECK(sm.second == doctest::Approx(m2).epsilon(1e-10));
  }
  CHECK_THROWS_AS(service_moments({}, 0.0), DomainError);
}

TEST_CASE("air success by enumeration of the receiver's neighbourhood") {
  const std::vector<double> p = {0.2, 0.3, 0.25};
  const std::vector<std::vector<double>> xi = {{0, 0.6, 0.1}, {0.6, 0, 0.7}, {0.1, 0.7, 0}};
  // 0 -> 1: receiver 1 silent; neighbour 2 silent or out of contact with 1.
  double ok = 0.0;
  for (int tx1 = 0; tx1 < 2; ++tx1)
    for (int tx2 = 0; tx2 < 2; ++tx2)
      for (int c21 = 0; c21 < 2; ++c21) {
        const double w = (tx1 ? p[1] : 1 - p[1]) * (tx2 ? p[2] : 1 - p[2]) * (c21 ? xi[2][1] : 1 - xi[2][1]);
        if (!tx1 && !(tx2 && c21)) ok += w;
      }
  CHECK(air_success_in_contact(0, 1, p, xi) == doctest::Approx(ok).epsilon(1e-15));
  CHECK(air_success_per_attempt(0, 1, p, xi) == doctest::Approx(0.6 * ok).epsilon(1e-15));
  CHECK(air_success(0, 1, p, xi) == doctest::Approx(0.2 * 0.6 * ok).epsilon(1e-15));
  // 2 -> 1 mirrors it; 1 -> 0 has no other neighbour of the receiver.
  CHECK(air_success_in_contact(2, 1, p, xi) ==
        doctest::Approx((1 - p[1]) * (1 - p[0] * xi[0][1])).epsilon(1e-15));
  CHECK(air_success_in_contact(1, 0, p, xi) == doctest::Approx(1 - p[0]).epsilon(1e-15));
  CHECK_THROWS_AS(air_success(0, 2, p, xi), DomainError);
}

TEST_CASE("ground success and contender count") {
  CHECK(contender_count(0.0) == 1);
  CHECK(contender_count(0.628) == 2);
  CHECK(contender_count(3.0) == 4);
  const double x = 0.2 * 0.9;
  CHECK(ground_success(2.5, 0.2, 0.9) == doctest::Approx(x * std::pow(1 - x, 3)));
  CHECK_THROWS_AS(ground_success(-1.0, 0.2, 0.9), DomainError);
}

TEST_CASE("link statistics") {
  const auto s = make_link_stats(0.25, 0.5, 3);
  CHECK(s.delivery == doctest::Approx(0.875));
  CHECK(s.service.mean == doctest::Approx(1.75 / 0.25));
  // Deferring while out of contact: attempts at rate p * xi.
  const auto a = make_air_link_stats(0.25, 0.4, 0.5, 3);
  CHECK(a.p_attempt == doctest::Approx(0.1));
  CHECK(a.service.mean == doctest::Approx(1.75 / 0.1));
  CHECK(a.delivery == doctest::Approx(0.875));
  const auto never = make_air_link_stats(0.25, 0.0, 0.5, 3);
  CHECK(std::isinf(never.service.mean));
  CHECK(never.delivery == 0.0);
}

TEST_CASE("saturation throughput of a lone sender") {
  MacParams m;
  // One contender (no covered devices), certain coverage: every busy slot is a success.
  const double p = 2.0 / 9.0;
  const double expected = p * m.payload_time_s() / ((1 - p) * m.slot_idle_s + p * m.success_time_s);
  CHECK(saturation_throughput(0.0, m, 1.0, p) == doctest::Approx(expected));
  CHECK(saturation_throughput(0.0, m, 0.0, p) == 0.0);
}
