#pragma once

#include <cmath>
#include <cstdint>

namespace creyes {

// splitmix64. One deterministic generator for every random draw in the
// project; std::* distributions are avoided because their output is
// implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Modulo bias is < 2^-57 for the small n used here.
  int next_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream from (seed, stream id) so subsystems never
// share draws.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
  return g.next_u64();
}

// Standard normal via Box-Muller; consumes exactly two uniform draws.
inline double next_gaussian(SplitMix64& rng) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double u1 = rng.next_double();
  double u2 = rng.next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace creyes
