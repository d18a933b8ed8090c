// Counter-based random streams keyed by (seed, stream index).
//
// Every draw is a pure function of (seed, stream, counter), so trial i of a
// Monte Carlo run sees the same numbers no matter which thread runs it or in
// what order. The mixer is the SplitMix64 finalizer.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "qutrit/linalg.hpp"

namespace qutrit {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ull))) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one value per call, the sine partner is discarded).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Rotation-invariant random qutrit: three complex standard normals, normalized.
inline std::array<Complex, 3> haar_qutrit(CounterRng& rng) {
  std::array<Complex, 3> v{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
  const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
  for (auto& z : v) z /= n;
  return v;
}

}  // namespace qutrit
