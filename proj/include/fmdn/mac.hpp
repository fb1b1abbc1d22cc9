#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fmdn/params.hpp"

namespace fmdn {

/// Per-slot attempt probability of a DCF node given its conditional
/// collision probability. Continuous through p_c = 1/2, where the closed
/// form has a removable singularity.
double attempt_probability(double collision_prob, const MacParams& m);

struct DcfOperatingPoint {
  double attempt = 0.0;
  double collision = 0.0;
  int iterations = 0;
};

/// Damped fixed point of {p = f(p_c), p_c = 1 - (1 - p)^(n - 1)} for `n`
/// symmetric contenders (damping 0.5, tolerance 1e-10, 500 iterations).
DcfOperatingPoint dcf_fixed_point(int contenders, const MacParams& m);

/// Unconditional per-slot probability that UAV i delivers to neighbour j:
/// i attempts, the pair is in contact, j is silent and no other neighbour
/// of j is transmitting to it. `contact[a][b]` is the pairwise contact
/// probability and `attempt[a]` the air attempt probability.
/// Throws DomainError unless |i - j| == 1.
double air_success(std::size_t i, std::size_t j, std::span<const double> attempt,
                   const std::vector<std::vector<double>>& contact);

/// Same event conditioned on i attempting (the per-attempt success).
double air_success_per_attempt(std::size_t i, std::size_t j, std::span<const double> attempt,
                               const std::vector<std::vector<double>>& contact);

/// Success of an attempt made while i and j are in contact.
double air_success_in_contact(std::size_t i, std::size_t j, std::span<const double> attempt,
                              const std::vector<std::vector<double>>& contact);

/// Probability that a tagged ground transmitter succeeds while the other
/// ceil(n) contenders stay silent: x (1 - x)^ceil(n), x = p * P_cov.
double ground_success(double covered, double attempt, double coverage);

struct AttemptMoments {
  double mean = 1.0;    // L
  double second = 1.0;  // E[L^2]
};

/// Moments of the number of attempts per packet when each attempt succeeds
/// with probability `p` and the packet is dropped after `k` failures.
AttemptMoments attempts_per_packet(double p, int k);

struct ServiceMoments {
  double mean = 1.0;    // tau, slots
  double second = 1.0;  // E[tau^2]
};

/// Service time in slots when every attempt waits a geometric(p) number of
/// slots. Throws DomainError for p <= 0.
ServiceMoments service_moments(const AttemptMoments& attempts, double attempt_prob);

/// Attempt and service moments of one link.
struct LinkStats {
  double p_attempt = 0.0;  // per-slot attempt rate while the class is served
  double p_success = 0.0;  // per attempt
  AttemptMoments attempts;
  ServiceMoments service;
  /// Probability the packet gets through within K attempts.
  double delivery = 0.0;
};

LinkStats make_link_stats(double attempt_prob, double success_per_attempt, int k);

/// Air link whose sender defers while out of contact: attempts happen at
/// rate attempt_prob * contact per slot and only those count towards K.
/// A link that is never in contact gets an infinite service time.
LinkStats make_air_link_stats(double attempt_prob, double contact, double success_in_contact,
                              int k);

/// Normalised saturation throughput of a UAV and its `covered` devices on
/// the ground channel (ceil(covered) + 1 contenders). The payload is
/// expressed in channel time, so the result is a fraction of airtime.
double saturation_throughput(double covered, const MacParams& m, double coverage,
                             double attempt);

inline int contender_count(double covered) {
  return static_cast<int>(std::ceil(covered - 1e-12)) + 1;
}

}  // namespace fmdn
