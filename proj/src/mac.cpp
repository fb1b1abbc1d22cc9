#include "fmdn/mac.hpp"

#include <cmath>
#include <string>

#include "fmdn/errors.hpp"

namespace fmdn {

double attempt_probability(double pc, const MacParams& m) {
  if (!(pc >= 0.0 && pc < 1.0)) throw DomainError("collision probability must lie in [0, 1)");
  const double w = m.contention_window;
  const int b = m.max_backoff_stage;
  // Divide numerator and denominator by eps = 1 - 2 pc; the remaining
  // ratio (1 - (1 - eps)^b) / eps tends to b as eps -> 0.
  const double eps = 1.0 - 2.0 * pc;
  double g = static_cast<double>(b);
  if (std::abs(eps) > 1e-300 && b > 0) g = -std::expm1(b * std::log1p(-eps)) / eps;
  if (b == 0) g = 0.0;
  return 2.0 / ((w + 1.0) + pc * w * g);
}

DcfOperatingPoint dcf_fixed_point(int contenders, const MacParams& m) {
  DcfOperatingPoint op;
  op.attempt = attempt_probability(0.0, m);
  if (contenders <= 1) return op;
  constexpr double kDamping = 0.5;
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 500;
  double p = op.attempt;
  for (int it = 1; it <= kMaxIter; ++it) {
    const double pc = 1.0 - std::pow(1.0 - p, contenders - 1);
    const double next = attempt_probability(std::min(pc, 1.0 - 1e-15), m);
    const double updated = kDamping * p + (1.0 - kDamping) * next;
    op.iterations = it;
    if (std::abs(updated - p) < kTol) {
      p = updated;
      break;
    }
    p = updated;
    if (it == kMaxIter)
      throw NumericalError("DCF fixed point did not converge for " +
                           std::to_string(contenders) + " contenders");
  }
  op.attempt = p;
  op.collision = 1.0 - std::pow(1.0 - p, contenders - 1);
  return op;
}

namespace {

void check_neighbours(std::size_t i, std::size_t j, std::size_t n) {
  if (i >= n || j >= n || (i + 1 != j && j + 1 != i))
    throw DomainError("air links exist only between adjacent UAVs (" + std::to_string(i + 1) +
                      " -> " + std::to_string(j + 1) + ")");
}

}  // namespace

double air_success_per_attempt(std::size_t i, std::size_t j, std::span<const double> attempt,
                               const std::vector<std::vector<double>>& contact) {
  return contact[i][j] * air_success_in_contact(i, j, attempt, contact);
}

double air_success_in_contact(std::size_t i, std::size_t j, std::span<const double> attempt,
                              const std::vector<std::vector<double>>& contact) {
  check_neighbours(i, j, attempt.size());
  double p = 1.0 - attempt[j];
  // One-tier neighbours of the receiver, other than the sender.
  for (std::size_t k : {j - 1, j + 1}) {
    if (k >= attempt.size() || k == i) continue;  // j - 1 wraps for j == 0
    p *= 1.0 - attempt[k] * contact[k][j];
  }
  return p;
}

double air_success(std::size_t i, std::size_t j, std::span<const double> attempt,
                   const std::vector<std::vector<double>>& contact) {
  return attempt[i] * air_success_per_attempt(i, j, attempt, contact);
}

double ground_success(double covered, double attempt, double coverage) {
  if (covered < 0.0) throw DomainError("covered device count must be >= 0");
  const double x = attempt * coverage;
  return x * std::pow(1.0 - x, contender_count(covered) - 1);
}

AttemptMoments attempts_per_packet(double p, int k) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("success probability must lie in [0, 1]");
  if (k < 1) throw DomainError("at least one attempt is required");
  AttemptMoments m;
  const double q = 1.0 - p;
  if (p < 1e-3) {
    // Direct enumeration avoids the cancellation in the closed form.
    double mean = 0.0, second = 0.0, fail = 1.0;
    for (int a = 1; a < k; ++a) {
      mean += a * fail * p;
      second += static_cast<double>(a) * a * fail * p;
      fail *= q;
    }
    mean += k * fail;
    second += static_cast<double>(k) * k * fail;
    m.mean = mean;
    m.second = second;
    return m;
  }
  const double qk = std::pow(q, k);
  m.mean = (1.0 - qk) / p;
  m.second = m.mean + 2.0 * q / (p * p) - 2.0 * qk * (k - q * (k - 1)) / (p * p);
  return m;
}

ServiceMoments service_moments(const AttemptMoments& a, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("attempt probability must lie in (0, 1]");
  return {a.mean / p, (a.second + a.mean * (1.0 - p)) / (p * p)};
}

LinkStats make_air_link_stats(double attempt_prob, double contact, double success, int k) {
  if (!(contact > 0.0)) {
    LinkStats s;
    s.p_attempt = 0.0;
    s.p_success = success;
    s.attempts = attempts_per_packet(success, k);
    s.service = {INFINITY, INFINITY};
    s.delivery = 0.0;
    return s;
  }
  return make_link_stats(attempt_prob * contact, success, k);
}

LinkStats make_link_stats(double attempt_prob, double success, int k) {
  LinkStats s;
  s.p_attempt = attempt_prob;
  s.p_success = success;
  s.attempts = attempts_per_packet(success, k);
  s.service = service_moments(s.attempts, attempt_prob);
  s.delivery = 1.0 - std::pow(1.0 - success, k);
  return s;
}

double saturation_throughput(double covered, const MacParams& m, double coverage,
                             double attempt) {
  if (covered < 0.0) throw DomainError("covered device count must be >= 0");
  const int n = contender_count(covered);
  const double x = attempt * coverage;
  const double idle = std::pow(1.0 - x, n);
  const double busy = 1.0 - idle;
  const double single = n * x * std::pow(1.0 - x, n - 1);
  const double denom =
      idle * m.slot_idle_s + single * m.success_time_s + (busy - single) * m.collision_time_s;
  if (!(denom > 0.0)) throw ConfigError("mac", "slot, success and collision times are all zero");
  return single * m.payload_time_s() / denom;
}

}  // namespace fmdn
