#pragma once

#include <cmath>
#include <cstdint>

namespace qicost {

/// Counter-based deterministic generator (splitmix64 core). Streams derived
/// from (seed, index) are independent and reproducible across platforms,
/// so experiment workers can fan out without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection-free scaling is fine at these ranges.
    return std::uint64_t(next_double() * double(n)) % n;
  }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  /// Standard normal via Box-Muller.
  double next_gaussian() {
    double u = next_double();
    while (u == 0.0) u = next_double();
    const double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace qicost
