#pragma once

#include "spdcalc/matrix.hpp"
#include "spdcalc/matrix_functions.hpp"
#include "spdcalc/quadrature.hpp"
#include "spdcalc/symmetric.hpp"

namespace spdcalc {

/// B^c Y B^{-c}
inline Matrix power_conjugate(const SpdMatrix& b, const Matrix& y, double c) {
  return spectral_apply(b, ScalarFunction::power(c)).matrix() * y *
         spectral_apply(b, ScalarFunction::power(-c)).matrix();
}

/// P(x) = int_0^1 B^((1+x)s) X B^(-(1+x)s) ds
inline Matrix p_of_x(const SpdMatrix& b, const Matrix& x_dir, double x, const QuadratureRule& rule) {
  if (x_dir.rows() != b.dim() || x_dir.cols() != b.dim()) {
    throw DimensionError("p_of_x: direction has wrong size");
  }
  return integrate(rule, [&](double s) { return power_conjugate(b, x_dir, (1.0 + x) * s); });
}

struct FCurvature {
  double f;   ///< <P(x), P(-x)>
  double f2;  ///< f''(x) from its double-integral representation
};

/// f(x) = <P(x), P(-x)> together with
/// f''(x) = int int |(s-t) B^(x_st/2) (LX - XL) B^(-x_st/2)|^2 ds dt,
/// x_st = s + t + (s - t) x, L = log B. The double integral uses the
/// tensor product of `rule`.
inline FCurvature f_of_x_and_curvature(const SpdMatrix& b, const Matrix& x_dir, double x,
                                       const QuadratureRule& rule) {
  FCurvature out;
  out.f = frob_inner(p_of_x(b, x_dir, x, rule), p_of_x(b, x_dir, -x, rule));
  const Matrix l = mat_log(b).matrix();
  const Matrix c = l * x_dir - x_dir * l;
  out.f2 = integrate_square(rule, [&](double s, double t) {
    const double xst = s + t + (s - t) * x;
    return (s - t) * (s - t) * frob_norm_sq(power_conjugate(b, c, 0.5 * xst));
  });
  return out;
}

}  // namespace spdcalc
