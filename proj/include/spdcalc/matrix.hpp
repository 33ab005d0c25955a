#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "spdcalc/errors.hpp"

namespace spdcalc {

/// Dense row-major real matrix. Small sizes only (d <= 16 in practice), so
/// every operation is a straightforward loop.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer list");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Matrix unit E_ij of size n x n.
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j) {
    Matrix m(n, n);
    m(i, j) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  Matrix& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  /// this += s * o
  Matrix& add_scaled(double s, const Matrix& o) {
    require_same_shape(o, "add_scaled");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }

  bool same_shape(const Matrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void require_same_shape(const Matrix& o, const char* op) const {
    if (!same_shape(o)) {
      throw DimensionError(std::string("Matrix::") + op + ": shape mismatch " +
                           std::to_string(rows_) + "x" + std::to_string(cols_) + " vs " +
                           std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
inline Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
inline Matrix operator*(Matrix a, double s) { return a *= s; }
inline Matrix operator*(double s, Matrix a) { return a *= s; }
inline Matrix operator-(Matrix a) { return a *= -1.0; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("Matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// Frobenius inner product: sum_ij x_ij y_ij.
inline double frob_inner(const Matrix& x, const Matrix& y) {
  if (!x.same_shape(y)) throw DimensionError("frob_inner: shape mismatch");
  double s = 0.0;
  const auto xv = x.values();
  const auto yv = y.values();
  for (std::size_t k = 0; k < xv.size(); ++k) s += xv[k] * yv[k];
  return s;
}

inline double frob_norm(const Matrix& x) {
  // Scaled accumulation; entries may be as large as |A|^45 in the chain checks.
  double scale = 0.0;
  for (double v : x.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : x.values()) {
    const double r = v / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

inline double frob_norm_sq(const Matrix& x) { return frob_inner(x, x); }

inline double trace(const Matrix& x) {
  if (!x.is_square()) throw DimensionError("trace: matrix is not square");
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, i);
  return s;
}

/// Entrywise (Hadamard) product.
inline Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw DimensionError("hadamard: shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t k = 0; k < c.values().size(); ++k) c.values()[k] = a.values()[k] * b.values()[k];
  return c;
}

/// [a, b] = ab - ba
inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// Relative distance |a - b| / max(|a|, |b|), zero when both vanish.
inline double rel_diff(const Matrix& a, const Matrix& b) {
  const double scale = std::max(frob_norm(a), frob_norm(b));
  const double diff = frob_norm(a - b);
  return scale == 0.0 ? diff : diff / scale;
}

inline bool is_finite(const Matrix& m) {
  return std::all_of(m.values().begin(), m.values().end(),
                     [](double v) { return std::isfinite(v); });
}

/// Inverse of a symmetric positive definite matrix through its Cholesky factor.
/// Throws NumericalError when a pivot is not positive.
inline Matrix spd_inverse(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("spd_inverse: matrix is not square");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) throw NumericalError("spd_inverse: non-positive Cholesky pivot", diag);
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  // Solve L L^T X = I column by column.
  Matrix inv(n, n);
  std::vector<double> y(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = i == c ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * inv(k, c);
      inv(ii, c) = s / l(ii, ii);
    }
  }
  return inv;
}

}  // namespace spdcalc
