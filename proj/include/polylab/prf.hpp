#pragma once

// Counter-based randomness. Every random quantity is a pure function of
// (seed, coordinates), so results never depend on evaluation order or on how
// work is split across threads.

#include <cmath>
#include <cstdint>

namespace polylab {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kDimSalt = 0xD1B54A32D192ED03ull;

/// SplitMix64 output function.
constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

/// Maps 64 random bits to (h + 1/2) 2^-64, a double strictly inside (0, 1).
///
/// For h within 2^10 of 2^64 the sum rounds up to 1; those values are moved
/// to the largest double below 1.
inline double open_unit(std::uint64_t h) {
  const double u = (static_cast<double>(h) + 0.5) * 0x1.0p-64;
  return u < 1.0 ? u : std::nextafter(1.0, 0.0);
}

/// Standard exponential by inversion; always finite and > 0.
inline double exponential_from_bits(std::uint64_t h) { return -std::log(open_unit(h)); }

/// Independent 64-bit stream value for (seed, trial, component).
constexpr std::uint64_t stream_bits(std::uint64_t seed, std::uint64_t trial, std::uint64_t component) {
  const std::uint64_t inner = splitmix_finalize(seed ^ (trial * kGolden));
  return splitmix_finalize(inner ^ ((component + 1) * kDimSalt));
}

}  // namespace polylab
