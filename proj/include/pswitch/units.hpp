#pragma once

#include "pswitch/errors.hpp"

namespace pswitch {

// All internal quantities are SI: angular frequencies and rates in rad/s,
// lengths in metres, times in seconds. User-facing layers (config, CSV)
// quote wavelengths in nm, separations in um, rates as value/2pi in GHz,
// and group velocities as fractions of c; the converters live here.

inline constexpr double speed_of_light = 2.99792458e8;  // m/s, exact
inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

inline double wavelength_to_omega(double lambda) {
  if (!(lambda > 0.0))
    throw validation_error("wavelength must be positive");
  return two_pi * speed_of_light / lambda;
}

inline double omega_to_wavelength(double omega) {
  if (!(omega > 0.0))
    throw validation_error("angular frequency must be positive");
  return two_pi * speed_of_light / omega;
}

// A rate quoted as "x = value / 2pi" (the usual g/2pi, kappa/2pi convention).
inline double angular_from_hz(double hz) { return two_pi * hz; }
inline double hz_from_angular(double omega) { return omega / two_pi; }

inline constexpr double nm = 1e-9;   // multiply to get metres
inline constexpr double um = 1e-6;
inline constexpr double ghz = 1e9;   // multiply to get Hz

}  // namespace pswitch
