// random.hpp
// Deterministic random streams for reproducible Monte Carlo runs.

#pragma once

#include <cstdint>
#include <random>

namespace mdm {

// Uniform random stream. std::mt19937_64 is fully specified by the standard
// and the [0,1) mapping below touches only the raw 64-bit output, so the
// sequence is identical across platforms for a given seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t bits() { return engine_(); }

  // Independent substream `index` of a master seed (splitmix64 mixing).
  // Worker w of a parallel run owns derive(seed, w).
  static RandomStream derive(std::uint64_t master_seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

// splitmix64 of master_seed advanced by (index + 1) increments.
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace mdm
