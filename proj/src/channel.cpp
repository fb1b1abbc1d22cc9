#include "fmdn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fmdn/errors.hpp"
#include "fmdn/quadrature.hpp"

namespace fmdn {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double p_los(double elevation, const ChannelParams& c, ClampCounter* clamps) {
  if (!(elevation >= 0.0) || elevation > kMaxElevation + 1e-15)
    throw DomainError("elevation angle outside [0, 5*pi/12]");
  const double base = std::max(kMaxElevation - elevation, 0.0);
  const double raw = c.beta1 * std::pow(base, c.beta2);
  if (raw > 1.0 || raw < 0.0) {
    if (clamps) ++clamps->los;
    return raw > 1.0 ? 1.0 : 0.0;
  }
  return raw;
}

double free_space_loss(double d, const ChannelParams& c) {
  const double x = 4.0 * std::numbers::pi * c.frequency_hz * d / kSpeedOfLight;
  return x * x;
}

double link_budget_psi(double d, const ChannelParams& c) {
  if (!(d > 0.0)) throw DomainError("link distance must be positive");
  // dBm - dBm - dB: the mW units cancel, leaving a ratio.
  return c.tx_power_dbm - c.noise_dbm - 10.0 * std::log10(free_space_loss(d, c)) -
         c.snr_threshold_db;
}

CoverageResult coverage_probability(double h, double aperture, double density,
                                    const ChannelParams& c, ClampCounter* clamps) {
  if (!(h > 0.0)) throw DomainError("altitude must be positive");
  if (!(aperture > 0.0 && aperture < std::numbers::pi))
    throw DomainError("aperture must lie in (0, pi)");
  CoverageResult out;
  if (density <= 0.0) return out;

  const double upper = std::min(aperture / 2.0, kMaxElevation);
  const double scale = density * std::numbers::pi * h * h;
  std::size_t los_clamps = 0;
  auto integrand = [&](double t) {
    const double cos_t = std::cos(t);
    const double tan_t = std::tan(t);
    const double psi = link_budget_psi(h / cos_t, c);
    const double sigma = c.los_sigma_a * std::exp(c.los_sigma_b * t);
    const double raw_los = c.beta1 * std::pow(std::max(kMaxElevation - t, 0.0), c.beta2);
    double los = raw_los;
    if (raw_los > 1.0) {
      los = 1.0;
      ++los_clamps;
    }
    return q_function((c.los_mean_db - psi) / sigma) * los * std::sin(t) /
           (cos_t * cos_t * cos_t) * std::exp(-scale * tan_t * tan_t);
  };
  const QuadratureResult q = integrate_adaptive(integrand, 0.0, upper);
  out.raw = 2.0 * scale * q.value;
  out.error_estimate = 2.0 * scale * q.error_estimate;
  out.probability = std::clamp(out.raw, 0.0, 1.0);
  out.clamped = out.probability != out.raw;
  if (clamps) {
    clamps->los += los_clamps;
    if (out.clamped) ++clamps->coverage;
  }
  return out;
}

}  // namespace fmdn
