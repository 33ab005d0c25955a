#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spdcalc/errors.hpp"
#include "spdcalc/matrix.hpp"
#include "spdcalc/quadrature.hpp"
#include "spdcalc/symmetric.hpp"

namespace spdcalc {

/// Eigenvalues closer than this (relative) use the derivative at their
/// midpoint in place of the divided difference.
inline constexpr double kDividedDifferenceMergeTolerance = 1e-8;

/// Real scalar function extended to symmetric matrices through the spectrum.
class ScalarFunction {
 public:
  enum class Kind { power, log, exp };

  static ScalarFunction power(double exponent) { return ScalarFunction(Kind::power, exponent); }
  static ScalarFunction log() { return ScalarFunction(Kind::log, 0.0); }
  static ScalarFunction exp() { return ScalarFunction(Kind::exp, 0.0); }

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }

  /// Power with a non-negative integer exponent is defined on all of R.
  bool requires_positive_spectrum() const noexcept {
    switch (kind_) {
      case Kind::log: return true;
      case Kind::exp: return false;
      case Kind::power: return !(exponent_ >= 0.0 && exponent_ == std::floor(exponent_));
    }
    return true;
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::power: return std::pow(x, exponent_);
      case Kind::log: return std::log(x);
      case Kind::exp: return std::exp(x);
    }
    return 0.0;
  }

  double derivative(double x) const {
    switch (kind_) {
      case Kind::power: return exponent_ == 0.0 ? 0.0 : exponent_ * std::pow(x, exponent_ - 1.0);
      case Kind::log: return 1.0 / x;
      case Kind::exp: return std::exp(x);
    }
    return 0.0;
  }

  /// (f(x) - f(y)) / (x - y), with f'((x+y)/2) for nearly equal arguments.
  /// Power, log and exp are evaluated in cancellation-free form.
  double divided_difference(double x, double y) const {
    const double gap = x - y;
    if (gap == 0.0 ||
        std::abs(gap) <= kDividedDifferenceMergeTolerance * std::max(std::abs(x), std::abs(y))) {
      return derivative(0.5 * (x + y));
    }
    switch (kind_) {
      case Kind::power:
        if (x > 0.0 && y > 0.0) {
          const double delta = gap / y;
          return std::pow(y, exponent_ - 1.0) * std::expm1(exponent_ * std::log1p(delta)) / delta;
        }
        return (std::pow(x, exponent_) - std::pow(y, exponent_)) / gap;
      case Kind::log: {
        const double delta = gap / y;
        return std::log1p(delta) / gap;
      }
      case Kind::exp: return std::exp(y) * std::expm1(gap) / gap;
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::power: return "power(" + std::to_string(exponent_) + ")";
      case Kind::log: return "log";
      case Kind::exp: return "exp";
    }
    return "?";
  }

 private:
  ScalarFunction(Kind k, double e) : kind_(k), exponent_(e) {}

  Kind kind_;
  double exponent_;
};

namespace detail {

inline void require_domain(const EigenDecomposition& eig, double norm, const ScalarFunction& f,
                           const char* who) {
  if (f.requires_positive_spectrum() && !(eig.lambda.front() > kSpdTolerance * norm)) {
    throw DomainError(std::string(who) + ": " + f.name() +
                      " needs a positive spectrum, smallest eigenvalue is " +
                      std::to_string(eig.lambda.front()));
  }
}

}  // namespace detail

/// Q f(Lambda) Q^T for a precomputed decomposition.
inline SymMatrix spectral_apply(const EigenDecomposition& eig, const ScalarFunction& f) {
  std::vector<double> values(eig.dim());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(eig.lambda[i]);
  return SymMatrix(eig.reconstruct(values));
}

inline SymMatrix spectral_apply(const SpdMatrix& a, const ScalarFunction& f) {
  return spectral_apply(a.eigen(), f);
}

inline SymMatrix spectral_apply(const SymMatrix& s, const ScalarFunction& f) {
  const EigenDecomposition eig = sym_eigen(s);
  detail::require_domain(eig, frob_norm(s.matrix()), f, "spectral_apply");
  return spectral_apply(eig, f);
}

inline SymMatrix mat_pow(const SpdMatrix& a, double exponent) {
  return spectral_apply(a, ScalarFunction::power(exponent));
}
inline SymMatrix mat_log(const SpdMatrix& a) { return spectral_apply(a, ScalarFunction::log()); }
inline SymMatrix mat_exp(const SymMatrix& s) { return spectral_apply(s, ScalarFunction::exp()); }

inline constexpr double kExpSeriesTolerance = 1e-16;

/// Truncated Taylor series of exp for a general square matrix. Terms are added
/// until the bound |X|^(k+1)/(k+1)! on the next term drops below
/// kExpSeriesTolerance times the partial sum.
inline Matrix exp_series(const Matrix& x) {
  if (!x.is_square()) throw DimensionError("exp_series: matrix is not square");
  const std::size_t n = x.rows();
  const double xnorm = frob_norm(x);
  Matrix sum = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  double term_bound = 1.0;  // |X|^k / k!
  for (int k = 1;; ++k) {
    term = term * x;
    term *= 1.0 / k;
    sum += term;
    term_bound *= xnorm / k;
    const double next_bound = term_bound * xnorm / (k + 1);
    // Once k+1 > |X| the bounds decrease geometrically.
    if (k + 1 > xnorm && next_bound <= kExpSeriesTolerance * frob_norm(sum)) break;
    if (k > 10000) throw NumericalError("exp_series: too many terms", next_bound);
  }
  return sum;
}

inline SymMatrix mat_exp_series(const SymMatrix& s) { return SymMatrix(exp_series(s.matrix())); }

/// log A = int_0^1 ((1-s)I + sA)^{-1} (A - I) ds evaluated with the given rule.
inline SymMatrix mat_log_integral(const SpdMatrix& a, const QuadratureRule& rule) {
  const std::size_t n = a.dim();
  const Matrix id = Matrix::identity(n);
  const Matrix a_minus_i = a.matrix() - id;
  Matrix acc = integrate(rule, [&](double s) {
    const Matrix resolvent = spd_inverse((1.0 - s) * id + s * a.matrix());
    return resolvent * a_minus_i;
  });
  // The integrand commutes with A, so the exact integral is symmetric.
  return SymMatrix(std::move(acc), 1e-9);
}

}  // namespace spdcalc
