#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "pswitch/errors.hpp"
#include "pswitch/matrix2c.hpp"
#include "pswitch/units.hpp"

namespace pswitch {

// One two-level emitter coupled to one cavity, side-coupled to the waveguide.
// All rates are angular (rad/s).
struct EmitterCavityParams {
  double omega_c = 0.0;  // cavity resonance
  double omega_e = 0.0;  // emitter resonance
  double g = 0.0;        // emitter-cavity coupling
  double v_r = 0.0;      // cavity decay into right-travelling waveguide mode
  double v_l = 0.0;      // cavity decay into left-travelling waveguide mode
  double kappa = 0.0;    // intrinsic (non-waveguide) cavity loss
  double gamma = 0.0;    // emitter decay into non-waveguide modes
};

// Centre-to-centre separation between neighbouring cavities along the waveguide.
struct WaveguideLink {
  double d = 0.0;  // metres
};

// A chain of cavities along one waveguide. cavities[0] is the first cavity
// seen by light injected at the input port; links[j] sits between cavities
// j and j+1.
struct SwitchLayout {
  std::vector<EmitterCavityParams> cavities;
  std::vector<WaveguideLink> links;
  double v_g = speed_of_light;  // waveguide group velocity, m/s
};

// Fabrication-level description of one cavity: wavelengths and quality
// factors rather than angular rates. This is the natural space for disorder
// draws; params_from_q_factors maps it onto rates.
struct CavityDesign {
  double lambda_c = 0.0;     // cavity resonance wavelength, m
  double lambda_e = 0.0;     // emitter transition wavelength, m
  double g = 0.0;            // emitter-cavity coupling, rad/s
  double q_coupled = 0.0;    // waveguide-coupling Q (per propagation direction)
  double q_intrinsic = 0.0;  // intrinsic-loss Q; may be +infinity for lossless
  double gamma = 0.0;        // emitter free-space decay, rad/s
};

struct SwitchDesign {
  std::vector<CavityDesign> cavities;
  std::vector<double> separations;  // metres, size = cavities.size() - 1
  double v_g = speed_of_light;
};

// Symmetric waveguide coupling V_R = V_L = omega_c / (2 Q_c); intrinsic loss
// kappa = omega_c / Q_u. Infinite Qs give zero rates.
inline EmitterCavityParams params_from_q_factors(double lambda_c, double lambda_e,
                                                 double g, double q_coupled,
                                                 double q_intrinsic, double gamma) {
  if (!(lambda_c > 0.0) || !(lambda_e > 0.0))
    throw validation_error("resonance wavelengths must be positive");
  if (!(q_coupled > 0.0) || !(q_intrinsic > 0.0))
    throw validation_error("quality factors must be positive");
  if (g < 0.0 || gamma < 0.0)
    throw validation_error("coupling and decay rates must be non-negative");
  EmitterCavityParams p;
  p.omega_c = wavelength_to_omega(lambda_c);
  p.omega_e = wavelength_to_omega(lambda_e);
  p.g = g;
  const double v = std::isinf(q_coupled) ? 0.0 : p.omega_c / (2.0 * q_coupled);
  p.v_r = v;
  p.v_l = v;
  p.kappa = std::isinf(q_intrinsic) ? 0.0 : p.omega_c / q_intrinsic;
  p.gamma = gamma;
  return p;
}

inline EmitterCavityParams params_from_design(const CavityDesign& c) {
  return params_from_q_factors(c.lambda_c, c.lambda_e, c.g, c.q_coupled,
                               c.q_intrinsic, c.gamma);
}

inline SwitchLayout to_layout(const SwitchDesign& design) {
  SwitchLayout layout;
  layout.v_g = design.v_g;
  layout.cavities.reserve(design.cavities.size());
  for (const auto& c : design.cavities)
    layout.cavities.push_back(params_from_design(c));
  layout.links.reserve(design.separations.size());
  for (double d : design.separations) layout.links.push_back({d});
  return layout;
}

// n identical cavities with uniform spacing.
inline SwitchLayout chain_layout(const EmitterCavityParams& cavity, int count,
                                 double separation, double v_g) {
  if (count < 0) throw validation_error("cavity count must be non-negative");
  SwitchLayout layout;
  layout.v_g = v_g;
  layout.cavities.assign(static_cast<std::size_t>(count), cavity);
  if (count > 1)
    layout.links.assign(static_cast<std::size_t>(count) - 1, {separation});
  return layout;
}

inline SwitchDesign chain_design(const CavityDesign& cavity, int count,
                                 double separation, double v_g) {
  if (count < 0) throw validation_error("cavity count must be non-negative");
  SwitchDesign design;
  design.v_g = v_g;
  design.cavities.assign(static_cast<std::size_t>(count), cavity);
  if (count > 1)
    design.separations.assign(static_cast<std::size_t>(count) - 1, separation);
  return design;
}

// Complex detunings of a probe at omega, with losses folded in as the
// imaginary parts: delta_c = (omega - omega_c) + i kappa/2,
// delta_e = (omega - omega_e) + i gamma/2.
struct Detunings {
  cplx delta_c;
  cplx delta_e;
};

inline Detunings detunings(const EmitterCavityParams& p, double omega) {
  return {cplx(omega - p.omega_c, 0.5 * p.kappa),
          cplx(omega - p.omega_e, 0.5 * p.gamma)};
}

// Returns a list of human-readable problems; empty means the layout is usable.
inline std::vector<std::string> validate_layout(const SwitchLayout& layout) {
  std::vector<std::string> issues;
  auto bad = [&](const std::string& msg) { issues.push_back(msg); };
  if (!(layout.v_g > 0.0) || layout.v_g > speed_of_light)
    bad("group velocity must lie in (0, c]");
  if (layout.cavities.empty()) {
    if (!layout.links.empty()) bad("links present without cavities");
  } else if (layout.links.size() + 1 != layout.cavities.size()) {
    bad("expected " + std::to_string(layout.cavities.size() - 1) +
        " links for " + std::to_string(layout.cavities.size()) +
        " cavities, got " + std::to_string(layout.links.size()));
  }
  for (std::size_t j = 0; j < layout.cavities.size(); ++j) {
    const auto& c = layout.cavities[j];
    const std::string tag = "cavity " + std::to_string(j) + ": ";
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(c.omega_c) || !finite(c.omega_e) || !finite(c.g) ||
        !finite(c.v_r) || !finite(c.v_l) || !finite(c.kappa) || !finite(c.gamma)) {
      bad(tag + "non-finite parameter");
      continue;
    }
    if (!(c.omega_c > 0.0)) bad(tag + "cavity resonance must be positive");
    if (!(c.omega_e > 0.0)) bad(tag + "emitter resonance must be positive");
    if (c.v_r < 0.0 || c.v_l < 0.0) bad(tag + "waveguide couplings must be non-negative");
    if (c.kappa < 0.0) bad(tag + "intrinsic loss must be non-negative");
    if (c.g < 0.0) bad(tag + "emitter-cavity coupling must be non-negative");
    if (c.gamma < 0.0) bad(tag + "emitter decay must be non-negative");
    // With g > 0 and gamma = 0 the response has a real pole at omega = omega_e.
    if (c.g > 0.0 && !(c.gamma > 0.0))
      bad(tag + "coupled emitter (g > 0) requires gamma > 0");
  }
  for (std::size_t j = 0; j < layout.links.size(); ++j) {
    if (!(layout.links[j].d > 0.0) || !std::isfinite(layout.links[j].d))
      bad("link " + std::to_string(j) + ": separation must be positive and finite");
  }
  return issues;
}

inline void validate_layout_or_throw(const SwitchLayout& layout) {
  auto issues = validate_layout(layout);
  if (issues.empty()) return;
  std::string msg = "invalid layout:";
  for (const auto& s : issues) msg += "\n  " + s;
  throw validation_error(msg);
}

}  // namespace pswitch
