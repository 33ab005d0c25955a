#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "spdcalc/errors.hpp"
#include "spdcalc/matrix.hpp"

namespace spdcalc {

/// Relative asymmetry |M - M^T| / |M| accepted (and averaged away) by SymMatrix.
inline constexpr double kSymmetryTolerance = 1e-12;
/// A symmetric matrix is accepted as SPD when lambda_min > kSpdTolerance * |A|_F.
inline constexpr double kSpdTolerance = 1e-12;

/// Dense real symmetric matrix. Entries are exactly symmetric after construction.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Symmetrizes m as (m + m^T)/2 when its relative asymmetry is below rel_tol,
  /// throws DomainError otherwise.
  explicit SymMatrix(Matrix m, double rel_tol = kSymmetryTolerance) {
    if (!m.is_square() || m.rows() == 0) {
      throw DimensionError("SymMatrix: expected a non-empty square matrix, got " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const std::size_t n = m.rows();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = m(i, j) - m(j, i);
        asym += 2.0 * d * d;
      }
    asym = std::sqrt(asym);
    const double norm = frob_norm(m);
    if (!(asym <= rel_tol * norm) && asym != 0.0) {
      throw DomainError("SymMatrix: relative asymmetry " + std::to_string(asym / norm) +
                        " exceeds tolerance");
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (m(i, j) + m(j, i));
        m(i, j) = avg;
        m(j, i) = avg;
      }
    m_ = std::move(m);
  }

  static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
  static SymMatrix zeros(std::size_t n) { return SymMatrix(Matrix(n, n)); }
  static SymMatrix diagonal(std::span<const double> d) { return SymMatrix(Matrix::diagonal(d)); }
  static SymMatrix diagonal(std::initializer_list<double> d) {
    const std::vector<double> v(d);
    return diagonal(std::span<const double>(v));
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }  // NOLINT(google-explicit-constructor)

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ + b.m_);
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ - b.m_);
  }
  friend SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

 private:
  Matrix m_;
};

/// A = Q diag(lambda) Q^T with orthogonal Q (eigenvectors in columns) and
/// ascending eigenvalues.
struct EigenDecomposition {
  Matrix q;
  std::vector<double> lambda;
  int sweeps = 0;

  std::size_t dim() const noexcept { return lambda.size(); }

  /// Q diag(values) Q^T for values given in the eigenbasis.
  Matrix reconstruct(std::span<const double> values) const {
    const std::size_t n = lambda.size();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += q(i, k) * values[k] * q(j, k);
        out(i, j) = s;
        out(j, i) = s;
      }
    return out;
  }

  Matrix reconstruct() const { return reconstruct(lambda); }

  /// Q^T X Q
  Matrix to_eigenbasis(const Matrix& x) const { return q.transpose() * x * q; }
  /// Q Y Q^T
  Matrix from_eigenbasis(const Matrix& y) const { return q * y * q.transpose(); }
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

inline constexpr int kJacobiMaxSweeps = 50;
inline constexpr double kJacobiTolerance = 1e-14;

/// Cyclic Jacobi eigensolver. Rotations are applied row by row over the strict
/// upper triangle, so the result is a deterministic function of the input.
/// Eigenvalues ascend; each eigenvector's first non-negligible component is positive.
inline EigenDecomposition sym_eigen(const SymMatrix& s) {
  const std::size_t n = s.dim();
  Matrix a = s.matrix();
  for (double v : a.values()) {
    if (!std::isfinite(v)) throw DomainError("sym_eigen: matrix has non-finite entries");
  }
  Matrix v = Matrix::identity(n);
  const double threshold = kJacobiTolerance * frob_norm(a);

  int sweep = 0;
  double off = detail::off_diagonal_norm(a);
  while (off > threshold) {
    if (sweep == kJacobiMaxSweeps) {
      throw NumericalError("sym_eigen: Jacobi iteration did not converge, off-diagonal residual " +
                               std::to_string(off),
                           off);
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - sn * arq;
          a(p, r) = a(r, p);
          a(r, q) = sn * arp + c * arq;
          a(q, r) = a(r, q);
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - sn * vrq;
          v(r, q) = sn * vrp + c * vrq;
        }
      }
    }
    off = detail::off_diagonal_norm(a);
  }

  // Normalize signs, then order by eigenvalue with a lexicographic tie-break.
  std::vector<std::vector<double>> vecs(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r) vecs[k][r] = v(r, k);
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(vecs[k][r]) > 1e-12) {
        if (vecs[k][r] < 0.0)
          for (auto& x : vecs[k]) x = -x;
        break;
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (a(i, i) != a(j, j)) return a(i, i) < a(j, j);
    return vecs[i] > vecs[j];
  });

  EigenDecomposition out;
  out.q = Matrix(n, n);
  out.lambda.resize(n);
  out.sweeps = sweep;
  for (std::size_t k = 0; k < n; ++k) {
    out.lambda[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.q(r, k) = vecs[order[k]][r];
  }
  return out;
}

inline double min_eigenvalue(const SymMatrix& s) { return sym_eigen(s).lambda.front(); }

/// Symmetric positive definite matrix. Carries its eigendecomposition, whose
/// smallest eigenvalue is the positivity certificate.
class SpdMatrix {
 public:
  explicit SpdMatrix(SymMatrix base) : base_(std::move(base)), eig_(sym_eigen(base_)) {
    const double norm = frob_norm(base_.matrix());
    if (!(eig_.lambda.front() > kSpdTolerance * norm)) {
      throw DomainError("SpdMatrix: smallest eigenvalue " + std::to_string(eig_.lambda.front()) +
                        " is not positive");
    }
  }

  explicit SpdMatrix(Matrix m) : SpdMatrix(SymMatrix(std::move(m))) {}

  static SpdMatrix identity(std::size_t n) { return SpdMatrix(SymMatrix::identity(n)); }
  static SpdMatrix diagonal(std::initializer_list<double> d) {
    return SpdMatrix(SymMatrix::diagonal(d));
  }

  std::size_t dim() const noexcept { return base_.dim(); }
  double min_eigenvalue() const noexcept { return eig_.lambda.front(); }
  double max_eigenvalue() const noexcept { return eig_.lambda.back(); }
  double condition_number() const noexcept { return max_eigenvalue() / min_eigenvalue(); }
  const EigenDecomposition& eigen() const noexcept { return eig_; }
  const SymMatrix& sym() const noexcept { return base_; }
  const Matrix& matrix() const noexcept { return base_.matrix(); }
  double operator()(std::size_t i, std::size_t j) const { return base_(i, j); }

  operator const SymMatrix&() const noexcept { return base_; }  // NOLINT
  operator const Matrix&() const noexcept { return base_.matrix(); }  // NOLINT

 private:
  SymMatrix base_;
  EigenDecomposition eig_;
};

}  // namespace spdcalc
