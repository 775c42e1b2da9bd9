#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pswitch/errors.hpp"
#include "pswitch/parallel.hpp"
#include "pswitch/transfer.hpp"
#include "pswitch/units.hpp"

namespace pswitch {

// User-facing spectral axes. Grids are uniform in the chosen axis variable:
// nanometres for the wavelength axis, rad/s for the angular-frequency axis.
enum class SpectralAxis { wavelength_nm, angular_frequency };

struct SpectralGrid {
  SpectralAxis axis = SpectralAxis::wavelength_nm;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
};

inline void validate_grid(const SpectralGrid& grid) {
  if (grid.points < 2) throw validation_error("grid needs at least 2 points");
  if (!(grid.start < grid.stop))
    throw validation_error("grid start must be below stop");
  if (grid.axis == SpectralAxis::wavelength_nm && !(grid.start > 0.0))
    throw validation_error("wavelength grid must start above 0 nm");
}

inline double grid_value(const SpectralGrid& grid, int i) {
  return grid.start + (grid.stop - grid.start) * static_cast<double>(i) /
                          static_cast<double>(grid.points - 1);
}

inline double axis_to_omega(SpectralAxis axis, double value) {
  return axis == SpectralAxis::wavelength_nm ? wavelength_to_omega(value * nm)
                                             : value;
}

struct SpectrumSample {
  double axis_value = 0.0;  // grid-axis units
  double omega = 0.0;       // rad/s
  cplx t{0.0};
  cplx r{0.0};
  double transmission = 0.0;  // |t|^2
  double reflection = 0.0;    // |r|^2
  double loss = 0.0;          // 1 - |t|^2 - |r|^2
};

struct ScatteringSpectrum {
  SpectralAxis axis = SpectralAxis::wavelength_nm;
  std::vector<SpectrumSample> samples;
};

// Rounding can leave loss infinitesimally negative for lossless chains; only
// the band [-1e-10, 0) is clipped to zero so genuine passivity violations
// stay visible.
inline double clip_rounding_loss(double loss) {
  return (loss < 0.0 && loss >= -1e-10) ? 0.0 : loss;
}

inline ScatteringSpectrum compute_spectrum(const SwitchLayout& layout,
                                           const SpectralGrid& grid) {
  validate_grid(grid);
  ScatteringSpectrum spectrum;
  spectrum.axis = grid.axis;
  spectrum.samples.resize(static_cast<std::size_t>(grid.points));
  parallel_for(spectrum.samples.size(), [&](std::size_t i) {
    SpectrumSample& s = spectrum.samples[i];
    s.axis_value = grid_value(grid, static_cast<int>(i));
    s.omega = axis_to_omega(grid.axis, s.axis_value);
    const auto amps = scattering(layout, s.omega);
    s.t = amps.t;
    s.r = amps.r;
    s.transmission = std::norm(amps.t);
    s.reflection = std::norm(amps.r);
    s.loss = clip_rounding_loss(1.0 - s.transmission - s.reflection);
  });
  return spectrum;
}

struct TransmissionMinimum {
  double axis_value = 0.0;    // parabola-refined location, grid-axis units
  double transmission = 0.0;  // value at the grid sample
  int index = 0;              // grid index of the discrete minimum
};

// Interior local minima of |t|^2 below `ceiling`, positions refined by a
// three-point parabola fit. Flat spectra yield no minima.
inline std::vector<TransmissionMinimum> find_transmission_minima(
    const ScatteringSpectrum& spectrum, double ceiling = 0.5) {
  std::vector<TransmissionMinimum> minima;
  const auto& s = spectrum.samples;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double y0 = s[i - 1].transmission;
    const double y1 = s[i].transmission;
    const double y2 = s[i + 1].transmission;
    if (!(y1 <= y0 && y1 < y2 && y1 < ceiling)) continue;
    const double denom = y0 - 2.0 * y1 + y2;
    double x = s[i].axis_value;
    if (denom > 0.0) {
      const double h = 0.5 * (s[i + 1].axis_value - s[i - 1].axis_value);
      x += 0.5 * h * (y0 - y2) / denom;
    }
    minima.push_back({x, y1, static_cast<int>(i)});
  }
  return minima;
}

// Time for one full traversal of the chain and back: 2 * total length / v_g.
inline double round_trip_time(const SwitchLayout& layout) {
  double length = 0.0;
  for (const auto& link : layout.links) length += link.d;
  return 2.0 * length / layout.v_g;
}

}  // namespace pswitch
