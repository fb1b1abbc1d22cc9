#pragma once

#include <cstddef>

#include "fmdn/params.hpp"

namespace fmdn {

inline constexpr double kSpeedOfLight = 299792458.0;
/// Elevation angle above which the LoS model is undefined (5*pi/12).
inline constexpr double kMaxElevation = 5.0 * 3.14159265358979323846 / 12.0;

/// Counts how often a probability had to be clamped into [0, 1].
struct ClampCounter {
  std::size_t los = 0;
  std::size_t coverage = 0;
};

/// Standard normal upper tail P[N(0,1) > x].
double q_function(double x);

/// LoS probability at elevation angle `elevation` (radians), clamped to
/// [0, 1]. Throws DomainError outside [0, 5*pi/12].
double p_los(double elevation, const ChannelParams& c, ClampCounter* clamps = nullptr);

/// Free-space path loss (linear power ratio) at distance `d` metres.
double free_space_loss(double d, const ChannelParams& c);

/// SNR margin in dB over the threshold at distance `d`.
double link_budget_psi(double d, const ChannelParams& c);

struct CoverageResult {
  double probability = 0.0;  // clamped to [0, 1]
  double raw = 0.0;          // before clamping
  double error_estimate = 0.0;
  bool clamped = false;
};

/// Coverage probability of a UAV at altitude `h` with beamwidth `aperture`
/// over devices of density `density`, by adaptive quadrature over the
/// footprint angle. The slant range at angle t is h / cos(t). The integrand
/// vanishes past 5*pi/12 where the LoS model ends.
CoverageResult coverage_probability(double h, double aperture, double density,
                                    const ChannelParams& c, ClampCounter* clamps = nullptr);

}  // namespace fmdn
