#pragma once

#include <cstdint>

// Counter-based SplitMix64. Every draw is addressed by (seed, counter), so
// noise fields can be generated in any order, on any platform, with
// identical results. mix64(0, 0) == 0xe220a8397b1dcdaf, the first output of
// the reference SplitMix64 stream seeded with 0.

namespace lgs::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(mix64(seed, counter) >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). Modulo bias is below 2^-53 for the
/// bounds used here (image coordinates).
inline std::uint64_t below(std::uint64_t seed, std::uint64_t counter, std::uint64_t bound) {
  return mix64(seed, counter) % bound;
}

}  // namespace lgs::rng
