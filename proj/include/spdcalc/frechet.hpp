#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spdcalc/curve.hpp"
#include "spdcalc/errors.hpp"
#include "spdcalc/matrix.hpp"
#include "spdcalc/matrix_functions.hpp"
#include "spdcalc/quadrature.hpp"
#include "spdcalc/symmetric.hpp"

namespace spdcalc {

/// int_0^1 R(s) H R(s) ds with R(s) = ((1-s)I + sA)^{-1}: the derivative of
/// log A in direction H.
inline Matrix dlog_integrand(const SpdMatrix& a, const Matrix& h, double s) {
  const Matrix id = Matrix::identity(a.dim());
  const Matrix r = spd_inverse((1.0 - s) * id + s * a.matrix());
  return r * h * r;
}

inline SymMatrix dlog_integral(const SpdMatrix& a, const SymMatrix& h, const QuadratureRule& rule) {
  if (h.dim() != a.dim()) throw DimensionError("dlog_integral: direction has wrong size");
  return SymMatrix(integrate(rule, [&](double s) { return dlog_integrand(a, h, s); }), 1e-9);
}

/// Derivative of f at A in direction H via the spectrum:
/// Q (F o (Q^T H Q)) Q^T with F_ij the divided difference of f at (lambda_i, lambda_j).
inline Matrix frechet_divided_difference(const EigenDecomposition& eig, const Matrix& h,
                                         const ScalarFunction& f) {
  const std::size_t n = eig.dim();
  if (h.rows() != n || h.cols() != n) {
    throw DimensionError("frechet_divided_difference: direction has wrong size");
  }
  Matrix y = eig.to_eigenbasis(h);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y(i, j) *= f.divided_difference(eig.lambda[i], eig.lambda[j]);
  return eig.from_eigenbasis(y);
}

inline Matrix frechet_divided_difference(const SpdMatrix& a, const Matrix& h,
                                         const ScalarFunction& f) {
  return frechet_divided_difference(a.eigen(), h, f);
}

inline Matrix frechet_divided_difference(const SymMatrix& a, const Matrix& h,
                                         const ScalarFunction& f) {
  const EigenDecomposition eig = sym_eigen(a);
  detail::require_domain(eig, frob_norm(a.matrix()), f, "frechet_divided_difference");
  return frechet_divided_difference(eig, h, f);
}

enum class DerivMethod { quadrature, divided_difference, finite_difference };

inline const char* to_string(DerivMethod m) {
  switch (m) {
    case DerivMethod::quadrature: return "quadrature";
    case DerivMethod::divided_difference: return "divided_difference";
    case DerivMethod::finite_difference: return "finite_difference";
  }
  return "?";
}

/// Value of the normalized power derivative: lambda^{-1} (A^lambda)' for
/// lambda != 0, (log A)' for lambda = 0.
struct DerivOutput {
  Matrix matrix;
  double lambda = 0.0;
  DerivMethod method = DerivMethod::divided_difference;
  /// Final quadrature order (quadrature method only).
  int quad_order = 0;
};

/// Normalized power derivative at a point, from A and A'. The finite-difference
/// method needs the whole curve; use d_lambda(curve, ...) for it.
inline DerivOutput d_lambda_at(const SpdMatrix& a, const SymMatrix& da, double lambda,
                               DerivMethod method, int quad_order = kDefaultQuadratureOrder) {
  if (da.dim() != a.dim()) throw DimensionError("d_lambda: derivative has wrong size");
  DerivOutput out;
  out.lambda = lambda;
  out.method = method;
  switch (method) {
    case DerivMethod::divided_difference:
      if (lambda == 0.0) {
        out.matrix = frechet_divided_difference(a, da, ScalarFunction::log());
      } else {
        out.matrix = frechet_divided_difference(a, da, ScalarFunction::power(lambda)) * (1.0 / lambda);
      }
      return out;
    case DerivMethod::quadrature: {
      auto dlog = integrate_adaptive([&](double s) { return dlog_integrand(a, da, s); }, quad_order);
      if (lambda == 0.0) {
        out.matrix = std::move(dlog.value);
        out.quad_order = dlog.order;
        return out;
      }
      const Matrix& x = dlog.value;
      auto rep = integrate_adaptive(
          [&](double s) {
            const Matrix left = spectral_apply(a, ScalarFunction::power(lambda * (1.0 - s))).matrix();
            const Matrix right = spectral_apply(a, ScalarFunction::power(lambda * s)).matrix();
            return left * x * right;
          },
          quad_order);
      out.matrix = std::move(rep.value);
      out.quad_order = std::max(dlog.order, rep.order);
      return out;
    }
    case DerivMethod::finite_difference:
      throw InvalidArgument("d_lambda_at: the finite-difference method needs a curve");
  }
  return out;
}

/// Normalized power derivative of a curve at t by the selected method.
inline DerivOutput d_lambda(const MatrixCurve& c, double t, double lambda, DerivMethod method,
                            int quad_order = kDefaultQuadratureOrder) {
  if (method == DerivMethod::finite_difference) {
    if (lambda == 0.0) {
      throw InvalidArgument("d_lambda: finite difference of A^lambda / lambda is undefined at lambda = 0");
    }
    const double h = fd_step(t);
    c.require_in_domain(t - h);
    c.require_in_domain(t + h);
    const auto f = ScalarFunction::power(lambda);
    const Matrix plus = spectral_apply(c.value(t + h), f).matrix();
    const Matrix minus = spectral_apply(c.value(t - h), f).matrix();
    DerivOutput out;
    out.matrix = (plus - minus) * (1.0 / (2.0 * h * lambda));
    out.lambda = lambda;
    out.method = method;
    return out;
  }
  return d_lambda_at(c.value(t), curve_derivative(c, t), lambda, method, quad_order);
}

inline DerivOutput d_lambda(const MatrixCurve& c, double t, double lambda, const QuadratureRule& rule,
                            DerivMethod method) {
  return d_lambda(c, t, lambda, method, rule.order());
}

/// d/dx A^(a + b x) = b A^(a + b x) log A.
inline SymMatrix d_power_param(const SpdMatrix& a, double coeff_a, double coeff_b, double x) {
  const auto& eig = a.eigen();
  std::vector<double> values(eig.dim());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double l = eig.lambda[i];
    values[i] = coeff_b * std::pow(l, coeff_a + coeff_b * x) * std::log(l);
  }
  return SymMatrix(eig.reconstruct(values));
}

}  // namespace spdcalc
