#pragma once

#include <cmath>
#include <cstdint>

namespace fmdn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent SplitMix64 stream keyed by (seed, replication, uav, channel,
/// purpose). Streams never share state, so adding draws to one purpose
/// leaves every other sequence untouched.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t replication, std::uint64_t uav,
            std::uint64_t channel, std::uint64_t purpose) {
    std::uint64_t k = splitmix64(seed);
    for (std::uint64_t part : {replication, uav, channel, purpose}) k = splitmix64(k ^ part);
    state_ = k;
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Inverse-transform Poisson sampler, fine for the small means used here.
  int poisson(double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace fmdn
