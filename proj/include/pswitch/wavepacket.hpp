#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pswitch/errors.hpp"
#include "pswitch/parallel.hpp"
#include "pswitch/quadrature.hpp"
#include "pswitch/transfer.hpp"
#include "pswitch/units.hpp"

namespace pswitch {

// Gaussian single-photon wave packet described in wavelength terms:
// lambda_cen is the carrier, sigma_lambda the FWHM of the spectral intensity
// expressed as a wavelength width.
struct WavePacketSpec {
  double lambda_cen = 0.0;    // m
  double sigma_lambda = 0.0;  // m
};

inline void validate_packet(const WavePacketSpec& p) {
  if (!(p.lambda_cen > 0.0)) throw validation_error("carrier wavelength must be positive");
  if (!(p.sigma_lambda > 0.0)) throw validation_error("spectral width must be positive");
  if (!(p.sigma_lambda < p.lambda_cen))
    throw validation_error("spectral width must be below the carrier wavelength");
}

inline double packet_omega_center(const WavePacketSpec& p) {
  return wavelength_to_omega(p.lambda_cen);
}

// FWHM of the spectral intensity in angular frequency:
// sigma_omega = 2 pi c sigma_lambda / lambda_cen^2.
inline double packet_sigma_omega(const WavePacketSpec& p) {
  return two_pi * speed_of_light * p.sigma_lambda / (p.lambda_cen * p.lambda_cen);
}

// Normalised spectral intensity |f(omega)|^2 with unit integral over omega:
// sqrt(4 ln2 / (pi s^2)) exp(-4 ln2 (omega - omega_cen)^2 / s^2).
inline double envelope_intensity(const WavePacketSpec& p, double omega) {
  static const double ln2 = std::log(2.0);
  const double s = packet_sigma_omega(p);
  const double x = (omega - packet_omega_center(p)) / s;
  return std::sqrt(4.0 * ln2 / (pi * s * s)) * std::exp(-4.0 * ln2 * x * x);
}

// Diagnostic only: duration (intensity FWHM) of the transform-limited pulse,
// 4 ln2 / sigma_omega. Conventions for quoting pulse durations differ, so no
// test pins this number.
inline double packet_duration_fwhm(const WavePacketSpec& p) {
  return 4.0 * std::log(2.0) / packet_sigma_omega(p);
}

enum class SwitchMode { reflection, transmission };

inline const char* to_string(SwitchMode m) {
  return m == SwitchMode::reflection ? "reflection" : "transmission";
}

// Wave-packet figures of merit for routing into one output port:
//   routing probability P = integral |amp|^2 |f|^2 domega
//   efficiency          E = P^2
//   fidelity            F = | integral amp |f|^2 domega |^2
// where amp is t (transmission mode) or r (reflection mode).
struct SwitchMetrics {
  SwitchMode mode = SwitchMode::transmission;
  double efficiency = 0.0;
  double fidelity = 0.0;
  double routing_probability = 0.0;
};

// The four spectral integrals both modes need, taken in one quadrature pass
// over [omega_cen - 10 sigma, omega_cen + 10 sigma] (the envelope carries
// ~1e-27 of its weight outside).
struct PacketIntegrals {
  double t_squared = 0.0;  // integral |t|^2 |f|^2
  cplx t_mean{0.0};        // integral t |f|^2
  double r_squared = 0.0;
  cplx r_mean{0.0};
  double quadrature_error_bound = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-8;
  int min_doublings = 12;  // first checked level: 2^12 = 4096 intervals
  int max_doublings = 18;
};

inline PacketIntegrals packet_integrals(const SwitchLayout& layout,
                                        const WavePacketSpec& packet,
                                        const QuadratureOptions& opts = {}) {
  validate_packet(packet);
  const double w0 = packet_omega_center(packet);
  const double s = packet_sigma_omega(packet);
  auto integrand = [&](double omega) -> std::array<cplx, 4> {
    const auto amps = scattering(layout, omega);
    const double w = envelope_intensity(packet, omega);
    return {w * std::norm(amps.t), w * amps.t, w * std::norm(amps.r), w * amps.r};
  };
  const auto q = integrate<4>(integrand, w0 - 10.0 * s, w0 + 10.0 * s,
                              opts.abs_tol, opts.min_doublings, opts.max_doublings);
  PacketIntegrals out;
  out.t_squared = q.value[0].real();
  out.t_mean = q.value[1];
  out.r_squared = q.value[2].real();
  out.r_mean = q.value[3];
  out.quadrature_error_bound = q.error_bound;
  out.evaluations = q.evaluations;
  return out;
}

inline SwitchMetrics metrics_from_integrals(const PacketIntegrals& ints,
                                            SwitchMode mode) {
  SwitchMetrics m;
  m.mode = mode;
  const double p = mode == SwitchMode::transmission ? ints.t_squared : ints.r_squared;
  const cplx a = mode == SwitchMode::transmission ? ints.t_mean : ints.r_mean;
  m.routing_probability = p;
  m.efficiency = p * p;
  m.fidelity = std::norm(a);
  return m;
}

inline SwitchMetrics switch_metrics(const SwitchLayout& layout,
                                    const WavePacketSpec& packet, SwitchMode mode,
                                    const QuadratureOptions& opts = {}) {
  return metrics_from_integrals(packet_integrals(layout, packet, opts), mode);
}

// Independent cross-check path: the same metrics computed on the wavelength
// axis with the transformed envelope
//   |f(lambda)|^2 = (lambda_cen/lambda)^2 sqrt(4 ln2/(pi sigma_lambda^2))
//                   exp(-4 ln2 (lambda_cen/lambda)^2 (lambda-lambda_cen)^2 / sigma_lambda^2)
// (the Jacobian of omega -> lambda folded into the envelope).
inline SwitchMetrics switch_metrics_wavelength(const SwitchLayout& layout,
                                               const WavePacketSpec& packet,
                                               SwitchMode mode,
                                               const QuadratureOptions& opts = {}) {
  validate_packet(packet);
  static const double ln2 = std::log(2.0);
  const double lc = packet.lambda_cen;
  const double sl = packet.sigma_lambda;
  auto integrand = [&](double lambda) -> std::array<cplx, 4> {
    const auto amps = scattering(layout, wavelength_to_omega(lambda));
    const double ratio = lc / lambda;
    const double x = ratio * (lambda - lc) / sl;
    const double w = ratio * ratio * std::sqrt(4.0 * ln2 / (pi * sl * sl)) *
                     std::exp(-4.0 * ln2 * x * x);
    return {w * std::norm(amps.t), w * amps.t, w * std::norm(amps.r), w * amps.r};
  };
  const auto q = integrate<4>(integrand, lc - 10.0 * sl, lc + 10.0 * sl,
                              opts.abs_tol, opts.min_doublings, opts.max_doublings);
  PacketIntegrals ints;
  ints.t_squared = q.value[0].real();
  ints.t_mean = q.value[1];
  ints.r_squared = q.value[2].real();
  ints.r_mean = q.value[3];
  return metrics_from_integrals(ints, mode);
}

// ---- parameter sweeps ------------------------------------------------------

// One (cavity recipe, output mode) pair evaluated at every sweep point.
struct SweepVariant {
  std::string label;
  EmitterCavityParams cavity;
  SwitchMode mode = SwitchMode::transmission;
};

struct SweepCell {
  double efficiency = 0.0;
  double fidelity = 0.0;
  double routing_probability = 0.0;
  bool ok = false;
  std::string error;  // set when ok is false; the sweep itself continues
};

struct SweepRow {
  double x = 0.0;  // sweep coordinate in user-facing units (um, GHz, count)
  std::vector<SweepCell> cells;  // one per variant, same order
};

namespace detail {

inline SweepCell evaluate_cell(const SwitchLayout& layout,
                               const WavePacketSpec& packet, SwitchMode mode,
                               const QuadratureOptions& opts) {
  SweepCell cell;
  try {
    const auto m = switch_metrics(layout, packet, mode, opts);
    cell.efficiency = m.efficiency;
    cell.fidelity = m.fidelity;
    cell.routing_probability = m.routing_probability;
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

template <class MakeLayout>
std::vector<SweepRow> run_sweep(const std::vector<double>& xs,
                                const std::vector<SweepVariant>& variants,
                                const WavePacketSpec& packet,
                                const QuadratureOptions& opts,
                                MakeLayout&& layout_for) {
  std::vector<SweepRow> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    rows[i].x = xs[i];
    rows[i].cells.resize(variants.size());
    for (std::size_t v = 0; v < variants.size(); ++v) {
      rows[i].cells[v] = evaluate_cell(layout_for(xs[i], variants[v]), packet,
                                       variants[v].mode, opts);
    }
  });
  return rows;
}

}  // namespace detail

// Inclusive range start..stop in steps of step; a step exceeding the range
// yields the single point start.
inline std::vector<double> sweep_points(double start, double stop, double step) {
  if (!(step > 0.0)) throw validation_error("sweep step must be positive");
  if (!(stop >= start)) throw validation_error("sweep stop must be >= start");
  const auto count = static_cast<std::size_t>(
      std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> xs(count);
  for (std::size_t k = 0; k < count; ++k)
    xs[k] = start + static_cast<double>(k) * step;
  return xs;
}

// Switching metrics versus cavity separation (x in um) for a chain of `count`
// identical cavities per variant.
inline std::vector<SweepRow> sweep_separations(
    const std::vector<SweepVariant>& variants, int count, double start_um,
    double stop_um, double step_um, double v_g, const WavePacketSpec& packet,
    const QuadratureOptions& opts = {}) {
  const auto xs = sweep_points(start_um, stop_um, step_um);
  return detail::run_sweep(xs, variants, packet, opts,
                           [&](double x, const SweepVariant& var) {
                             return chain_layout(var.cavity, count, x * um, v_g);
                           });
}

// Switching metrics versus emitter-cavity coupling (x = g/2pi in GHz); each
// variant's cavity recipe has its g replaced by the sweep value.
inline std::vector<SweepRow> sweep_coupling(
    const std::vector<SweepVariant>& variants, const std::vector<double>& g_ghz,
    int count, double separation, double v_g, const WavePacketSpec& packet,
    const QuadratureOptions& opts = {}) {
  return detail::run_sweep(g_ghz, variants, packet, opts,
                           [&](double x, const SweepVariant& var) {
                             EmitterCavityParams cavity = var.cavity;
                             cavity.g = angular_from_hz(x * ghz);
                             return chain_layout(cavity, count, separation, v_g);
                           });
}

// Switching metrics versus the number of cavities (x = n).
inline std::vector<SweepRow> sweep_cavity_count(
    const std::vector<SweepVariant>& variants, int n_min, int n_max,
    double separation, double v_g, const WavePacketSpec& packet,
    const QuadratureOptions& opts = {}) {
  if (n_min < 0 || n_max < n_min)
    throw validation_error("cavity-count sweep needs 0 <= n_min <= n_max");
  std::vector<double> xs;
  for (int n = n_min; n <= n_max; ++n) xs.push_back(static_cast<double>(n));
  return detail::run_sweep(xs, variants, packet, opts,
                           [&](double x, const SweepVariant& var) {
                             return chain_layout(var.cavity,
                                                 static_cast<int>(x + 0.5),
                                                 separation, v_g);
                           });
}

}  // namespace pswitch
