#pragma once

#include <cmath>
#include <complex>

#include "pswitch/errors.hpp"
#include "pswitch/transfer.hpp"

namespace pswitch {

// Closed-form response of n identical, equally spaced cavities, used as an
// independent cross-check of the matrix cascade. The per-period matrix
// (unnormalised by beta + alpha_minus) has
//   trace/2 = mu = beta cos(phi) - (V_R + V_L)/2 sin(phi)
//   det     = beta^2 - alpha_minus^2
// with phi = omega d / v_g, giving eigenvalues
//   lambda_pm = mu -++ sqrt(V_R V_L - (beta sin(phi) + (V_R + V_L)/2 cos(phi))^2).
// The formulas below are invariant under swapping lambda_plus <-> lambda_minus,
// so the branch of the complex square root is irrelevant.
struct ChainEigenvalues {
  cplx lambda_plus;
  cplx lambda_minus;
};

namespace detail {

struct ScaledChainTerms {
  cplx beta;       // beta / s
  double vr, vl;   // V_R / s, V_L / s
  double phi;      // omega d / v_g
  double scale;    // s = max(|beta|, V_R, V_L)
};

// The closed forms are homogeneous of degree zero in (beta, V_R, V_L), so all
// rates are rescaled to O(1) before taking n-th powers; this keeps
// lambda^(n+1) far from overflow for any practical n.
inline ScaledChainTerms scaled_chain_terms(const EmitterCavityParams& p,
                                           double d, double v_g, double omega) {
  const auto t = cavity_terms(p, omega);
  const double vr = std::abs(p.v_r);
  const double vl = std::abs(p.v_l);
  const double s = std::max({std::abs(t.beta), vr, vl});
  if (!(s > 0.0))
    throw singular_matrix_error(
        "chain response undefined: beta and both couplings vanish");
  return {t.beta / s, vr / s, vl / s, omega * d / v_g, s};
}

inline ChainEigenvalues eigenvalues_from_terms(const ScaledChainTerms& t) {
  const double c = std::cos(t.phi);
  const double s = std::sin(t.phi);
  const double vbar = 0.5 * (t.vr + t.vl);
  const cplx mu = t.beta * c - vbar * s;
  const cplx inner = t.beta * s + vbar * c;
  const cplx root = std::sqrt(cplx(t.vr * t.vl) - inner * inner);
  return {mu + root, mu - root};
}

}  // namespace detail

// Eigenvalues of the unnormalised per-period matrix, in rad/s. They satisfy
//   lambda_+ + lambda_- = 2 (beta cos(phi) - (V_R + V_L)/2 sin(phi))
//   lambda_+ * lambda_- = beta^2 - alpha_minus^2.
inline ChainEigenvalues chain_eigenvalues(const EmitterCavityParams& p, double d,
                                          double v_g, double omega) {
  const auto terms = detail::scaled_chain_terms(p, d, v_g, omega);
  auto ev = detail::eigenvalues_from_terms(terms);
  ev.lambda_plus *= terms.scale;
  ev.lambda_minus *= terms.scale;
  return ev;
}

// Scattering amplitudes of the n-cavity chain in closed form:
//   t_n = (l+ - l-) (beta - alpha_minus)^n / D
//   r_n = -i e^{-i phi} sqrt(V_R V_L) (l+^n - l-^n) / D
//   D   = (l+^{n+1} - l-^{n+1}) - (l+^n - l-^n)(beta - alpha_plus) e^{-i phi}
// This sits in a boundary-phase convention shifted relative to the cascade:
//   t_n = t_cascade e^{-i phi},   r_n = r_cascade e^{-2 i phi}.
// so intensities match exactly while phases differ by powers of e^{-i phi}.
inline ScatteringAmplitudes chain_scattering(const EmitterCavityParams& p, int n,
                                             double d, double v_g, double omega) {
  if (n < 0) throw validation_error("cavity count must be non-negative");
  if (n == 0) return {1.0, 0.0};
  const auto t = detail::scaled_chain_terms(p, d, v_g, omega);
  const auto [lp, lm] = detail::eigenvalues_from_terms(t);
  const double lscale = std::max(std::abs(lp), std::abs(lm));
  if (std::abs(lp - lm) < 1e-12 * lscale + 1e-300)
    throw degenerate_eigenvalue_error(
        "per-period eigenvalues coincide; closed-form chain response undefined");
  const cplx alpha_plus(0.0, 0.5 * (t.vr + t.vl));
  const cplx alpha_minus(0.0, 0.5 * (t.vr - t.vl));
  const cplx phase = std::polar(1.0, -t.phi);
  cplx lp_n = 1.0, lm_n = 1.0;  // lambda^n
  for (int k = 0; k < n; ++k) {
    lp_n *= lp;
    lm_n *= lm;
  }
  const cplx diff_n = lp_n - lm_n;
  const cplx diff_n1 = lp_n * lp - lm_n * lm;
  const cplx den = diff_n1 - diff_n * (t.beta - alpha_plus) * phase;
  cplx bminus_n = 1.0;  // (beta - alpha_minus)^n
  const cplx bminus = t.beta - alpha_minus;
  for (int k = 0; k < n; ++k) bminus_n *= bminus;
  if (std::abs(den) < 1e-300)
    throw degenerate_output_error("closed-form chain denominator vanished");
  return {(lp - lm) * bminus_n / den,
          cplx(0.0, -std::sqrt(t.vr * t.vl)) * phase * diff_n / den};
}

}  // namespace pswitch
