#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pswitch/errors.hpp"
#include "pswitch/parallel.hpp"
#include "pswitch/rng.hpp"
#include "pswitch/spectra.hpp"

namespace pswitch {

// Which fabrication parameter fluctuates. emitter_follows_cavity draws one
// wavelength per cavity and moves cavity and emitter together, modelling a
// common fabrication shift of the whole unit.
enum class DisorderTarget {
  cavity_wavelength,        // lambda_c per cavity; lambda_e untouched
  emitter_wavelength,       // lambda_e per cavity
  emitter_follows_cavity,   // lambda_c per cavity, lambda_e = lambda_c
  coupled_q,                // waveguide-coupling Q per cavity
  separation                // link length per link
};

inline const char* to_string(DisorderTarget t) {
  switch (t) {
    case DisorderTarget::cavity_wavelength: return "cavity_wavelength";
    case DisorderTarget::emitter_wavelength: return "emitter_wavelength";
    case DisorderTarget::emitter_follows_cavity: return "emitter_follows_cavity";
    case DisorderTarget::coupled_q: return "coupled_q";
    case DisorderTarget::separation: return "separation";
  }
  return "?";
}

// Independent Gaussian draws, one per affected slot (cavity or link):
// value = mean + sigma * z. mean/sigma are in the target's natural SI units
// (metres for wavelengths and separations, pure number for Q). Draws that
// land at or below zero are re-drawn with an incremented attempt counter;
// a slot that stays unphysical for 1000 attempts raises an error.
struct DisorderSpec {
  DisorderTarget target = DisorderTarget::cavity_wavelength;
  double mean = 0.0;
  double sigma = 0.0;
  int realizations = 0;
  std::uint64_t seed = 0;
};

inline void validate_disorder(const DisorderSpec& spec) {
  if (!(spec.mean > 0.0)) throw validation_error("disorder mean must be positive");
  if (spec.sigma < 0.0) throw validation_error("disorder sigma must be non-negative");
  if (spec.realizations < 1)
    throw validation_error("disorder needs at least one realization");
}

namespace detail {

inline double positive_draw(const DisorderSpec& spec, std::uint64_t realization,
                            std::uint64_t slot) {
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    const double v =
        spec.mean + spec.sigma * rng::gaussian(spec.seed, realization, slot, attempt);
    if (v > 0.0) return v;
  }
  throw resample_budget_error(
      "disorder draw for slot " + std::to_string(slot) +
      " stayed unphysical after 1000 attempts; mean/sigma describe a "
      "distribution with almost no positive support");
}

}  // namespace detail

// One disordered copy of the base design. Also reports the drawn values
// (one per affected slot, in slot order).
inline SwitchDesign sample_design(const SwitchDesign& base, const DisorderSpec& spec,
                                  std::uint64_t realization,
                                  std::vector<double>* drawn = nullptr) {
  validate_disorder(spec);
  SwitchDesign d = base;
  const bool per_link = spec.target == DisorderTarget::separation;
  const std::size_t slots = per_link ? d.separations.size() : d.cavities.size();
  if (drawn) drawn->assign(slots, 0.0);
  for (std::size_t s = 0; s < slots; ++s) {
    const double v = detail::positive_draw(spec, realization, s);
    if (drawn) (*drawn)[s] = v;
    switch (spec.target) {
      case DisorderTarget::cavity_wavelength:
        d.cavities[s].lambda_c = v;
        break;
      case DisorderTarget::emitter_wavelength:
        d.cavities[s].lambda_e = v;
        break;
      case DisorderTarget::emitter_follows_cavity:
        d.cavities[s].lambda_c = v;
        d.cavities[s].lambda_e = v;
        break;
      case DisorderTarget::coupled_q:
        d.cavities[s].q_coupled = v;
        break;
      case DisorderTarget::separation:
        d.separations[s] = v;
        break;
    }
  }
  return d;
}

inline SwitchLayout sample_layout(const SwitchDesign& base, const DisorderSpec& spec,
                                  std::uint64_t realization,
                                  std::vector<double>* drawn = nullptr) {
  return to_layout(sample_design(base, spec, realization, drawn));
}

struct DisorderStudyOptions {
  int sample_spectra = 2;  // how many individual realizations to keep
};

// Ensemble-averaged response. The headline averaged curves are the pointwise
// means of |t|^2, |r|^2 and the loss over realizations; the t/r lanes of
// `mean` hold the coherent (complex) averages, which are a different and
// deliberately preserved diagnostic.
struct DisorderResult {
  ScatteringSpectrum mean;
  std::vector<ScatteringSpectrum> samples;       // first k realizations verbatim
  std::vector<std::vector<double>> draws;        // [realization][slot]
  int realizations = 0;
};

inline DisorderResult disorder_study(const SwitchDesign& base,
                                     const DisorderSpec& spec,
                                     const SpectralGrid& grid,
                                     const DisorderStudyOptions& opts = {}) {
  validate_disorder(spec);
  validate_grid(grid);
  const std::size_t n = static_cast<std::size_t>(spec.realizations);
  const std::size_t keep = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::max(0, opts.sample_spectra)));

  DisorderResult out;
  out.realizations = spec.realizations;
  out.draws.resize(n);
  out.samples.resize(keep);

  // Fixed-size chunks summed serially inside and merged in chunk order, so
  // the floating-point reduction tree is independent of the worker count and
  // results are bitwise reproducible for a given seed.
  constexpr std::size_t chunk = 16;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  struct Accum {
    std::vector<cplx> t, r;
    std::vector<double> t2, r2, loss;
  };
  std::vector<Accum> partial(chunks);
  const std::size_t pts = static_cast<std::size_t>(grid.points);

  parallel_for(chunks, [&](std::size_t ci) {
    Accum& acc = partial[ci];
    acc.t.assign(pts, 0.0);
    acc.r.assign(pts, 0.0);
    acc.t2.assign(pts, 0.0);
    acc.r2.assign(pts, 0.0);
    acc.loss.assign(pts, 0.0);
    const std::size_t lo = ci * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    for (std::size_t rz = lo; rz < hi; ++rz) {
      const auto layout = sample_layout(base, spec, rz, &out.draws[rz]);
      const auto spectrum = compute_spectrum(layout, grid);
      for (std::size_t i = 0; i < pts; ++i) {
        const auto& smp = spectrum.samples[i];
        acc.t[i] += smp.t;
        acc.r[i] += smp.r;
        acc.t2[i] += smp.transmission;
        acc.r2[i] += smp.reflection;
        acc.loss[i] += smp.loss;
      }
      if (rz < keep) out.samples[rz] = spectrum;
    }
  });

  out.mean.axis = grid.axis;
  out.mean.samples.resize(pts);
  for (std::size_t i = 0; i < pts; ++i) {
    SpectrumSample& s = out.mean.samples[i];
    s.axis_value = grid_value(grid, static_cast<int>(i));
    s.omega = axis_to_omega(grid.axis, s.axis_value);
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t ci = 0; ci < chunks; ++ci) {
    for (std::size_t i = 0; i < pts; ++i) {
      out.mean.samples[i].t += partial[ci].t[i];
      out.mean.samples[i].r += partial[ci].r[i];
      out.mean.samples[i].transmission += partial[ci].t2[i];
      out.mean.samples[i].reflection += partial[ci].r2[i];
      out.mean.samples[i].loss += partial[ci].loss[i];
    }
  }
  for (std::size_t i = 0; i < pts; ++i) {
    SpectrumSample& s = out.mean.samples[i];
    s.t *= inv;
    s.r *= inv;
    s.transmission *= inv;
    s.reflection *= inv;
    s.loss *= inv;
  }
  return out;
}

// Root-mean-square difference between two transmission curves on identical grids.
inline double rms_transmission_deviation(const ScatteringSpectrum& a,
                                         const ScatteringSpectrum& b) {
  if (a.samples.size() != b.samples.size() || a.samples.empty())
    throw validation_error("rms deviation needs equal non-empty grids");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = a.samples[i].transmission - b.samples[i].transmission;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.samples.size()));
}

// ---- single-cavity failure and its mitigations -----------------------------

struct MitigationAction {
  enum class Kind { weak_g, detune_to, decouple } kind = Kind::weak_g;
  double g = 0.0;       // rad/s, weak_g replacement coupling
  double lambda = 0.0;  // m, detune_to target (emitter follows cavity)
};

// Returns the layout with one cavity altered. Rates derived from Q factors
// are left untouched by detune_to (only the resonances move); decouple cuts
// both waveguide couplings but keeps the cavity's geometric slot, so
// propagation phases are unchanged.
inline SwitchLayout apply_mitigation(const SwitchLayout& base, int cavity_index,
                                     const MitigationAction& action) {
  if (cavity_index < 0 ||
      static_cast<std::size_t>(cavity_index) >= base.cavities.size())
    throw validation_error("mitigation cavity index out of range");
  SwitchLayout layout = base;
  EmitterCavityParams& c = layout.cavities[static_cast<std::size_t>(cavity_index)];
  switch (action.kind) {
    case MitigationAction::Kind::weak_g:
      if (!(action.g >= 0.0)) throw validation_error("weak_g rate must be >= 0");
      c.g = action.g;
      break;
    case MitigationAction::Kind::detune_to: {
      const double w = wavelength_to_omega(action.lambda);
      c.omega_c = w;
      c.omega_e = w;
      break;
    }
    case MitigationAction::Kind::decouple:
      c.v_r = 0.0;
      c.v_l = 0.0;
      break;
  }
  return layout;
}

}  // namespace pswitch
