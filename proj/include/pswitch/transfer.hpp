#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "pswitch/errors.hpp"
#include "pswitch/matrix2c.hpp"
#include "pswitch/model.hpp"

namespace pswitch {

// Building blocks of one cavity transfer matrix at probe frequency omega:
//   beta        = delta_c - |g|^2 / delta_e   (emitter-dressed cavity detuning)
//   alpha_plus  = (i/2)(V_R + V_L)
//   alpha_minus = (i/2)(V_R - V_L)
//   zeta        = -i sqrt(V_R V_L)
// with the loss-extended detunings from detunings().
struct CavityMatrixTerms {
  cplx beta;
  cplx alpha_plus;
  cplx alpha_minus;
  cplx zeta;
};

inline CavityMatrixTerms cavity_terms(const EmitterCavityParams& p, double omega) {
  const auto [delta_c, delta_e] = detunings(p, omega);
  cplx beta = delta_c;
  if (p.g != 0.0) beta -= (p.g * p.g) / delta_e;
  const double vr = std::abs(p.v_r);
  const double vl = std::abs(p.v_l);
  return {beta, cplx(0.0, 0.5 * (vr + vl)), cplx(0.0, 0.5 * (vr - vl)),
          cplx(0.0, -std::sqrt(vr * vl))};
}

// Transfer matrix of a single side-coupled cavity, relating the field pair
// (right-mover, left-mover) on its right side to the pair on its left:
//
//        1         [ beta - alpha_plus      zeta             ]
//  ------------- * [ conj(zeta)             beta + alpha_plus ]
//  beta + alpha_minus
//
// Singular exactly when beta + alpha_minus vanishes (a lossless cavity with
// symmetric coupling driven on resonance), which is reported as an error
// rather than returning infinities.
inline Matrix2c cavity_matrix_from_terms(const CavityMatrixTerms& t) {
  const cplx den = t.beta + t.alpha_minus;
  const double scale = std::max({std::abs(t.beta), std::abs(t.alpha_plus),
                                 std::abs(t.zeta)});
  if (std::abs(den) < 1e-12 * scale + 1e-300)
    throw singular_matrix_error(
        "cavity transfer matrix singular: |beta + alpha_minus| ~ 0 "
        "(lossless symmetric cavity on resonance)");
  const cplx inv = 1.0 / den;
  return {inv * (t.beta - t.alpha_plus), inv * t.zeta,
          inv * std::conj(t.zeta), inv * (t.beta + t.alpha_plus)};
}

inline Matrix2c cavity_matrix(const EmitterCavityParams& p, double omega) {
  return cavity_matrix_from_terms(cavity_terms(p, omega));
}

// Free propagation over distance d at group velocity v_g. The phase uses the
// absolute probe frequency: phi = omega d / v_g.
inline Matrix2c waveguide_matrix(double d, double v_g, double omega) {
  const double phi = omega * d / v_g;
  return {std::polar(1.0, -phi), 0.0, 0.0, std::polar(1.0, phi)};
}

// Total transfer matrix with its determinant carried alongside. The
// determinant of each cavity factor is (beta - alpha_minus)/(beta + alpha_minus)
// and waveguide factors are unimodular, so det(M) accumulates as a stable
// product of order-one factors — unlike M11 M22 - M12 M21, which cancels
// catastrophically once the entries grow inside a stop band.
struct TransferProduct {
  Matrix2c m = Matrix2c::identity();
  cplx det{1.0};
};

// M = T_N ... T_2 W_12 T_1, accumulated left-to-right from the input side so
// cavity 0 is applied first.
inline TransferProduct total_transfer(const SwitchLayout& layout, double omega) {
  TransferProduct out;
  if (layout.cavities.empty()) return out;
  auto apply_cavity = [&](std::size_t j) {
    try {
      const auto terms = cavity_terms(layout.cavities[j], omega);
      const Matrix2c t = cavity_matrix_from_terms(terms);
      out.m = (j == 0) ? t : t * out.m;
      out.det *= (terms.beta - terms.alpha_minus) / (terms.beta + terms.alpha_minus);
    } catch (const singular_matrix_error& e) {
      throw singular_matrix_error(std::string(e.what()) + " (cavity " +
                                      std::to_string(j) + ")",
                                  static_cast<int>(j));
    }
  };
  apply_cavity(0);
  for (std::size_t j = 1; j < layout.cavities.size(); ++j) {
    const Matrix2c w = waveguide_matrix(layout.links[j - 1].d, layout.v_g, omega);
    out.m = w * out.m;
    apply_cavity(j);
  }
  return out;
}

inline Matrix2c total_matrix(const SwitchLayout& layout, double omega) {
  return total_transfer(layout, omega).m;
}

struct ScatteringAmplitudes {
  cplx t;  // transmission amplitude, input port -> output port
  cplx r;  // reflection amplitude back into the input port
};

// Amplitudes for a right-moving probe entering at the left with nothing
// injected from the right: t = M11 - M12 M21 / M22 = det(M)/M22,
// r = -M21 / M22. Prefer scattering(): it uses the det(M)/M22 form with the
// stably accumulated determinant.
inline ScatteringAmplitudes scattering_from_matrix(const Matrix2c& m) {
  if (std::abs(m.m22) < 1e-12 * m.max_abs_entry() + 1e-300)
    throw degenerate_output_error(
        "total transfer matrix has |M22| ~ 0; scattering amplitudes undefined "
        "(unreachable for passive parameters)");
  return {m.m11 - m.m12 * m.m21 / m.m22, -m.m21 / m.m22};
}

inline ScatteringAmplitudes scattering(const SwitchLayout& layout, double omega) {
  const auto tp = total_transfer(layout, omega);
  if (std::abs(tp.m.m22) < 1e-12 * tp.m.max_abs_entry() + 1e-300)
    throw degenerate_output_error(
        "total transfer matrix has |M22| ~ 0; scattering amplitudes undefined "
        "(unreachable for passive parameters)");
  return {tp.det / tp.m.m22, -tp.m.m21 / tp.m.m22};
}

}  // namespace pswitch
