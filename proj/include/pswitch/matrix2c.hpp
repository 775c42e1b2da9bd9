#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace pswitch {

using cplx = std::complex<double>;

// Dense complex 2x2 matrix, row-major entries m11..m22. Small enough that a
// hand-rolled value type is clearer than pulling in a linear-algebra library.
struct Matrix2c {
  cplx m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

  static Matrix2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

  friend Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }

  friend Matrix2c operator*(const cplx& s, const Matrix2c& a) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
  }

  cplx det() const { return m11 * m22 - m12 * m21; }

  double max_abs_entry() const {
    return std::max(std::max(std::abs(m11), std::abs(m12)),
                    std::max(std::abs(m21), std::abs(m22)));
  }

  bool is_finite() const {
    auto ok = [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    };
    return ok(m11) && ok(m12) && ok(m21) && ok(m22);
  }
};

}  // namespace pswitch
