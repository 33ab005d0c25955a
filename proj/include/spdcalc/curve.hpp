#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "spdcalc/errors.hpp"
#include "spdcalc/matrix.hpp"
#include "spdcalc/symmetric.hpp"

namespace spdcalc {

using MatrixMap = std::function<Matrix(double)>;

/// Central-difference step cbrt(eps) * max(1, |t|).
inline double fd_step(double t) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(t));
}

/// Unvalidated one-parameter matrix family t -> M(t). Used for the
/// non-symmetric examples, which must not pass through SPD validation.
struct RawCurve {
  std::size_t dim = 0;
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  MatrixMap value;
  std::optional<MatrixMap> derivative;
  /// Non-zero matrix parallel to derivative(t), continued through zeros of the
  /// derivative. Quantities homogeneous of degree zero in M'(t) may use it.
  std::optional<MatrixMap> tangent;
  std::string label;

  bool contains(double t) const noexcept { return t >= t_lo && t <= t_hi; }
};

/// SPD-valued curve t -> A(t) on [t_lo, t_hi] with optional analytic A'(t).
class MatrixCurve {
 public:
  MatrixCurve(std::size_t dim, double t_lo, double t_hi, MatrixMap value,
              std::optional<MatrixMap> derivative = std::nullopt, std::string label = {},
              std::optional<MatrixMap> tangent = std::nullopt) {
    if (dim == 0) throw InvalidArgument("MatrixCurve: dimension must be positive");
    if (!(t_lo <= t_hi)) throw InvalidArgument("MatrixCurve: empty parameter interval");
    raw_.dim = dim;
    raw_.t_lo = t_lo;
    raw_.t_hi = t_hi;
    raw_.value = std::move(value);
    raw_.derivative = std::move(derivative);
    raw_.tangent = std::move(tangent);
    raw_.label = std::move(label);
  }

  std::size_t dim() const noexcept { return raw_.dim; }
  double t_lo() const noexcept { return raw_.t_lo; }
  double t_hi() const noexcept { return raw_.t_hi; }
  const std::string& label() const noexcept { return raw_.label; }
  bool contains(double t) const noexcept { return raw_.contains(t); }
  bool has_derivative() const noexcept { return raw_.derivative.has_value(); }
  bool has_tangent() const noexcept { return raw_.tangent.has_value(); }
  const RawCurve& raw() const noexcept { return raw_; }

  /// A(t), validated as SPD.
  SpdMatrix value(double t) const {
    require_in_domain(t);
    return SpdMatrix(raw_.value(t));
  }

  std::optional<SymMatrix> analytic_derivative(double t) const {
    if (!raw_.derivative) return std::nullopt;
    require_in_domain(t);
    return SymMatrix((*raw_.derivative)(t));
  }

  std::optional<Matrix> tangent(double t) const {
    if (!raw_.tangent) return std::nullopt;
    require_in_domain(t);
    return (*raw_.tangent)(t);
  }

  void require_in_domain(double t) const {
    if (!contains(t)) {
      throw DomainError("MatrixCurve '" + raw_.label + "': t = " + std::to_string(t) +
                        " outside [" + std::to_string(raw_.t_lo) + ", " +
                        std::to_string(raw_.t_hi) + "]");
    }
  }

 private:
  RawCurve raw_;
};

/// (A(t+h) - A(t-h)) / (2h)
inline SymMatrix central_difference(const MatrixCurve& c, double t, double h) {
  c.require_in_domain(t - h);
  c.require_in_domain(t + h);
  return SymMatrix((c.value(t + h).matrix() - c.value(t - h).matrix()) * (0.5 / h));
}

/// A'(t): the analytic derivative when the curve has one, else a central difference.
inline SymMatrix curve_derivative(const MatrixCurve& c, double t, double h) {
  if (auto d = c.analytic_derivative(t)) return *std::move(d);
  return central_difference(c, t, h);
}

inline SymMatrix curve_derivative(const MatrixCurve& c, double t) {
  return curve_derivative(c, t, fd_step(t));
}

/// |central difference - analytic derivative|_F; O(h^2) for smooth curves.
inline double derivative_residual(const MatrixCurve& c, double t, double h) {
  const auto d = c.analytic_derivative(t);
  if (!d) throw InvalidArgument("derivative_residual: curve has no analytic derivative");
  return frob_norm(central_difference(c, t, h).matrix() - d->matrix());
}

}  // namespace spdcalc
