#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pswitch {

// Exit-code mapping used by the CLI: config_error -> 2, validation_error -> 3,
// numerical_error -> 4.

// Malformed input: unreadable file, bad JSON, unknown keys, wrong types.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input describing an unphysical or inconsistent system.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation that cannot proceed at the requested parameter point.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cavity transfer matrix undefined: |beta + alpha_minus| below tolerance
// (lossless symmetrically coupled cavity driven exactly on resonance).
struct singular_matrix_error : numerical_error {
  explicit singular_matrix_error(const std::string& msg, int cavity = -1)
      : numerical_error(msg), cavity_index(cavity) {}
  int cavity_index;  // 0-based position in the chain, -1 if not applicable
};

// Scattering amplitudes undefined: |M22| of the total transfer matrix below
// tolerance. Unreachable for passive parameters; signals an unphysical point.
struct degenerate_output_error : numerical_error {
  using numerical_error::numerical_error;
};

// Closed-form chain response undefined: the two per-period eigenvalues coincide.
struct degenerate_eigenvalue_error : numerical_error {
  using numerical_error::numerical_error;
};

// Adaptive quadrature failed to reach the requested tolerance within the
// refinement budget. Carries the best available estimates and the last
// observed change between refinement levels.
struct quadrature_error : numerical_error {
  quadrature_error(const std::string& msg,
                   std::vector<std::complex<double>> best,
                   double bound)
      : numerical_error(msg), best_estimate(std::move(best)), error_bound(bound) {}
  std::vector<std::complex<double>> best_estimate;
  double error_bound;
};

// Disorder sampling kept drawing unphysical values for one slot.
struct resample_budget_error : validation_error {
  using validation_error::validation_error;
};

}  // namespace pswitch
