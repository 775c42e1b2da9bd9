#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "pswitch/errors.hpp"
#include "pswitch/matrix2c.hpp"

namespace pswitch {

template <std::size_t K>
struct QuadratureResult {
  std::array<cplx, K> value{};
  double error_bound = 0.0;     // last inter-level change, max over components
  std::size_t evaluations = 0;  // integrand calls
};

// Iterative trapezoid rule with interval halving and Richardson (Simpson)
// extrapolation, applied componentwise to a vector-valued integrand
// f: double -> array<complex, K>. Each halving reuses all previous function
// values and only evaluates the new midpoints.
//
// The first `min_doublings` refinements run unconditionally so that features
// much narrower than the integration span are seen before convergence is
// judged; afterwards the rule stops once the extrapolated values change by
// less than abs_tol between levels. Exceeding max_doublings throws
// quadrature_error carrying the best estimate.
template <std::size_t K, class F>
QuadratureResult<K> integrate(F&& f, double a, double b, double abs_tol,
                              int min_doublings = 12, int max_doublings = 18) {
  if (!(b > a)) throw validation_error("integration interval is empty");
  std::array<cplx, K> trap{};  // current trapezoid sums
  std::array<cplx, K> simpson{};
  std::array<cplx, K> simpson_prev{};
  std::size_t evals = 0;

  auto add_scaled = [](std::array<cplx, K>& acc, const std::array<cplx, K>& v,
                       double s) {
    for (std::size_t k = 0; k < K; ++k) acc[k] += s * v[k];
  };

  {
    const auto fa = f(a);
    const auto fb = f(b);
    evals += 2;
    for (std::size_t k = 0; k < K; ++k)
      trap[k] = 0.5 * (b - a) * (fa[k] + fb[k]);
  }

  double last_change = 0.0;
  for (int level = 1; level <= max_doublings; ++level) {
    const std::size_t midpoints = std::size_t{1} << (level - 1);
    const double h = (b - a) / static_cast<double>(std::size_t{1} << level);
    std::array<cplx, K> mids{};
    for (std::size_t m = 0; m < midpoints; ++m) {
      const double x = a + (2.0 * static_cast<double>(m) + 1.0) * h;
      add_scaled(mids, f(x), 1.0);
    }
    evals += midpoints;
    const std::array<cplx, K> trap_prev = trap;
    for (std::size_t k = 0; k < K; ++k)
      trap[k] = 0.5 * trap_prev[k] + h * mids[k];
    simpson_prev = simpson;
    // one Richardson step on the trapezoid pair = composite Simpson
    for (std::size_t k = 0; k < K; ++k)
      simpson[k] = (4.0 * trap[k] - trap_prev[k]) / 3.0;
    if (level >= 2) {
      last_change = 0.0;
      for (std::size_t k = 0; k < K; ++k)
        last_change = std::max(last_change, std::abs(simpson[k] - simpson_prev[k]));
      if (level > min_doublings && last_change < abs_tol)
        return {simpson, last_change, evals};
    }
  }
  throw quadrature_error(
      "quadrature did not converge within the refinement budget",
      std::vector<cplx>(simpson.begin(), simpson.end()), last_change);
}

}  // namespace pswitch
