#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace dfrc {

/// SplitMix64 (Steele, Lea & Flood, "Fast splittable pseudorandom number
/// generators", OOPSLA 2014). The state walks a Weyl sequence and the output
/// is a bijective hash of it, so the generator is effectively counter-based:
/// independent streams are derived by hashing (seed, stream) instead of
/// jumping. Integer outputs are identical on every platform, which is what
/// makes seeded runs reproducible bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Derive an independent stream: both words go through the finalizer so
  /// (seed, stream) pairs map to well-separated states.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_index) {
    return SplitMix64(mix(mix(seed) + 0x9e3779b97f4a7c15ULL * (stream_index + 1)));
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on (0, 1]: 53 random bits, never zero so log() is safe.
  double uniform01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Standard complex Gaussian CN(0, 1): real and imaginary parts are
  /// independent N(0, 1/2). Marsaglia's polar method; no trig calls.
  std::complex<double> gaussian_complex() {
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    // sqrt(-2 ln s / s) would give two N(0,1) draws; the extra 1/sqrt(2)
    // folds in the per-component variance 1/2 of CN(0,1).
    const double r = std::sqrt(-std::log(s) / s);
    return {u * r, v * r};
  }

  /// Two independent N(0, 1) draws.
  void gaussian_pair(double& z0, double& z1) {
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double r = std::sqrt(-2.0 * std::log(s) / s);
    z0 = u * r;
    z1 = v * r;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace dfrc
