#pragma once

#include <cmath>
#include <cstdint>

#include "pswitch/units.hpp"

namespace pswitch {

// Counter-based Gaussian stream. Every draw is a pure function of
// (seed, realization, slot, attempt), so results are independent of
// evaluation order, thread schedule, and realization batching — unlike
// stateful engines plus std::normal_distribution, whose output also varies
// between standard-library implementations. Reproducibility is bitwise for a
// fixed build (the only libm calls are sqrt/log/cos on the same machine).
namespace rng {

// SplitMix64 finaliser: a well-mixed bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
  return mix64(h + 0x9e3779b97f4a7c15ULL * (v + 1));
}

// Uniform double in (0, 1]: 53 mantissa bits, never zero (log-safe).
inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal draw via Box-Muller on two decorrelated words.
inline double gaussian(std::uint64_t seed, std::uint64_t realization,
                       std::uint64_t slot, std::uint64_t attempt) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;  // pi fraction, arbitrary start
  h = absorb(h, seed);
  h = absorb(h, realization);
  h = absorb(h, slot);
  h = absorb(h, attempt);
  const double u1 = unit_open(mix64(h ^ 0x452821e638d01377ULL));
  const double u2 = unit_open(mix64(h ^ 0xc0ac29b7c97c50ddULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace rng
}  // namespace pswitch
