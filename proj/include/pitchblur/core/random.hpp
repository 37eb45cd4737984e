#pragma once

#include <cstdint>
#include <random>

namespace pitchblur {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent stream derived from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::int64_t stream);

/// mt19937_64 with value mappings that do not depend on the standard
/// library's distribution implementations, so draws are portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pitchblur
