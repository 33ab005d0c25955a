#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "spdcalc/curve.hpp"
#include "spdcalc/errors.hpp"
#include "spdcalc/matrix.hpp"
#include "spdcalc/symmetric.hpp"

namespace spdcalc {

/// SplitMix64 (Steele, Lea, Flood 2014). Fixed algorithm so that sweeps are
/// reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n); n must be positive.
  std::size_t index(std::size_t n) noexcept { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::uint64_t state_;
};

/// Independent stream seed for sub-task `index` of a run seeded with `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  SplitMix64 g(base ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  return g.next();
}

/// Square matrix with entries uniform in [-1, 1].
inline Matrix random_matrix(SplitMix64& rng, std::size_t d) {
  Matrix m(d, d);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

/// Orthogonal matrix from Gram-Schmidt on a random matrix.
inline Matrix random_orthogonal(SplitMix64& rng, std::size_t d) {
  for (;;) {
    Matrix m = random_matrix(rng, d);
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += m(i, j) * m(i, k);
        for (std::size_t i = 0; i < d; ++i) m(i, j) -= dot * m(i, k);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) norm += m(i, j) * m(i, j);
      norm = std::sqrt(norm);
      if (norm < 1e-6) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < d; ++i) m(i, j) /= norm;
    }
    if (ok) return m;
  }
}

/// SPD matrix Q diag(l) Q^T with log-uniform eigenvalues in [1/sqrt(cond), sqrt(cond)],
/// the extremes pinned so that the condition number is exactly `cond` for d >= 2.
inline SpdMatrix random_spd_matrix(SplitMix64& rng, std::size_t d, double cond = 10.0) {
  if (d == 0) throw InvalidArgument("random_spd_matrix: dimension must be positive");
  if (!(cond >= 1.0)) throw InvalidArgument("random_spd_matrix: condition number below 1");
  const double half = 0.5 * std::log(cond);
  std::vector<double> l(d);
  for (std::size_t i = 0; i < d; ++i) l[i] = std::exp(rng.uniform(-half, half));
  if (d >= 2) {
    l[0] = std::exp(-half);
    l[1] = std::exp(half);
  }
  const Matrix q = random_orthogonal(rng, d);
  Matrix a = q * Matrix::diagonal(l) * q.transpose();
  return SpdMatrix(SymMatrix(a, 1e-10));
}

inline constexpr int kMaxCurveDegree = 4;
inline constexpr double kDefaultCurveOffset = 0.25;

/// A(t) = G(t)^T G(t) + eps I, G_ij(t) = sum_k a_ijk cos(kt) + b_ijk sin(kt),
/// coefficients uniform in [-1, 1] / sqrt(d).
class RandomSpdCurve {
 public:
  RandomSpdCurve(std::uint64_t seed, std::size_t d, double eps = kDefaultCurveOffset, int degree = 2)
      : seed_(seed), d_(d), eps_(eps), degree_(degree) {
    if (d == 0) throw InvalidArgument("random_spd_curve: dimension must be positive");
    if (!(eps > 0.0)) throw InvalidArgument("random_spd_curve: offset must be positive");
    if (degree < 0 || degree > kMaxCurveDegree) {
      throw InvalidArgument("random_spd_curve: degree must lie in [0, 4]");
    }
    SplitMix64 rng(seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    const std::size_t n = d * d * static_cast<std::size_t>(degree + 1);
    cos_.resize(n);
    sin_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      cos_[i] = s * rng.uniform(-1.0, 1.0);
      sin_[i] = s * rng.uniform(-1.0, 1.0);
    }
    // the k = 0 sine terms vanish identically
    for (std::size_t e = 0; e < d * d; ++e) sin_[e * (degree + 1)] = 0.0;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t dim() const noexcept { return d_; }
  double offset() const noexcept { return eps_; }
  int degree() const noexcept { return degree_; }
  /// Coefficients indexed [(i * d + j) * (degree + 1) + k].
  const std::vector<double>& cos_coefficients() const noexcept { return cos_; }
  const std::vector<double>& sin_coefficients() const noexcept { return sin_; }

  Matrix g(double t) const { return eval(t, false); }
  Matrix g_prime(double t) const { return eval(t, true); }

  Matrix value(double t) const {
    const Matrix gt = g(t);
    Matrix a = gt.transpose() * gt;
    for (std::size_t i = 0; i < d_; ++i) a(i, i) += eps_;
    return a;
  }

  Matrix derivative(double t) const {
    const Matrix gt = g(t);
    const Matrix dg = g_prime(t);
    return dg.transpose() * gt + gt.transpose() * dg;
  }

  MatrixCurve curve() const {
    auto self = std::make_shared<const RandomSpdCurve>(*this);
    const double inf = std::numeric_limits<double>::infinity();
    return MatrixCurve(
        d_, -inf, inf, [self](double t) { return self->value(t); },
        [self](double t) { return self->derivative(t); }, "random:" + std::to_string(seed_));
  }

 private:
  Matrix eval(double t, bool deriv) const {
    Matrix out(d_, d_);
    const std::size_t stride = static_cast<std::size_t>(degree_ + 1);
    for (std::size_t e = 0; e < d_ * d_; ++e) {
      double v = 0.0;
      for (int k = 0; k <= degree_; ++k) {
        const double c = cos_[e * stride + k];
        const double s = sin_[e * stride + k];
        const double kt = k * t;
        if (deriv) {
          v += k * (s * std::cos(kt) - c * std::sin(kt));
        } else {
          v += c * std::cos(kt) + s * std::sin(kt);
        }
      }
      out(e / d_, e % d_) = v;
    }
    return out;
  }

  std::uint64_t seed_;
  std::size_t d_;
  double eps_;
  int degree_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

inline MatrixCurve random_spd_curve(std::uint64_t seed, std::size_t d, double eps = kDefaultCurveOffset,
                                    int degree = 2) {
  return RandomSpdCurve(seed, d, eps, degree).curve();
}

}  // namespace spdcalc
