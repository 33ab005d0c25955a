#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spdcalc/matrix_functions.hpp"
#include "spdcalc/norm_bounds.hpp"
#include "spdcalc/random.hpp"

using namespace spdcalc;

namespace {

double diff(const Matrix& a, const Matrix& b) { return frob_norm(a - b); }

}  // namespace

TEST(ScalarFunction, DividedDifferenceAgainstNaiveFormula) {
  const double pairs[][2] = {{2.0, 0.5}, {1.0, 3.0}, {0.1, 10.0}, {7.0, 6.9}};
  for (double e : {-2.5, -1.0, 0.5, 2.0, 3.7}) {
    const auto f = ScalarFunction::power(e);
    for (const auto& p : pairs) {
      const double naive = (std::pow(p[0], e) - std::pow(p[1], e)) / (p[0] - p[1]);
      EXPECT_NEAR(f.divided_difference(p[0], p[1]), naive, 1e-13 * std::abs(naive));
    }
  }
  const auto lg = ScalarFunction::log();
  const auto ex = ScalarFunction::exp();
  for (const auto& p : pairs) {
    EXPECT_NEAR(lg.divided_difference(p[0], p[1]), (std::log(p[0]) - std::log(p[1])) / (p[0] - p[1]),
                1e-13);
    const double naive = (std::exp(p[0]) - std::exp(p[1])) / (p[0] - p[1]);
    EXPECT_NEAR(ex.divided_difference(p[0], p[1]), naive, 1e-13 * naive);
  }
}

TEST(ScalarFunction, DividedDifferenceMergesToDerivative) {
  const auto f = ScalarFunction::power(1.5);
  EXPECT_DOUBLE_EQ(f.divided_difference(2.0, 2.0), 1.5 * std::sqrt(2.0));
  // just outside the merge band the closed form stays accurate
  const double x = 2.0, y = 2.0 * (1.0 + 1e-7);
  EXPECT_NEAR(f.divided_difference(x, y), 1.5 * std::sqrt(0.5 * (x + y)), 1e-12);
  EXPECT_DOUBLE_EQ(ScalarFunction::log().divided_difference(4.0, 4.0), 0.25);
}

TEST(ScalarFunction, Domain) {
  EXPECT_FALSE(ScalarFunction::power(2.0).requires_positive_spectrum());
  EXPECT_TRUE(ScalarFunction::power(0.5).requires_positive_spectrum());
  EXPECT_TRUE(ScalarFunction::power(-1.0).requires_positive_spectrum());
  EXPECT_TRUE(ScalarFunction::log().requires_positive_spectrum());
  EXPECT_FALSE(ScalarFunction::exp().requires_positive_spectrum());
}

TEST(MatPow, DiagonalAndIntegerPowers) {
  const SpdMatrix d = SpdMatrix::diagonal({4.0, 9.0});
  EXPECT_LT(diff(mat_pow(d, 0.5).matrix(), Matrix{{2, 0}, {0, 3}}), 1e-15);
  SplitMix64 rng(21);
  for (std::size_t n : {1, 2, 4}) {
    const SpdMatrix a = random_spd_matrix(rng, n, 20.0);
    const Matrix& m = a.matrix();
    const double scale = frob_norm(m);
    EXPECT_LT(diff(mat_pow(a, 2.0).matrix(), m * m), 1e-13 * scale * scale);
    EXPECT_LT(diff(mat_pow(a, 3.0).matrix(), m * m * m), 1e-13 * scale * scale * scale);
    EXPECT_LT(diff(mat_pow(a, -1.0).matrix(), spd_inverse(m)), 1e-12 * frob_norm(spd_inverse(m)));
    EXPECT_LT(diff(mat_pow(a, 0.0).matrix(), Matrix::identity(n)), 1e-14);
    const Matrix h = mat_pow(a, 0.5).matrix();
    EXPECT_LT(diff(h * h, m), 1e-13 * scale);
  }
}

TEST(MatPow, IntegerPowerOfIndefiniteSymmetric) {
  const SymMatrix s(Matrix{{0, 1}, {1, 0}});
  EXPECT_LT(diff(spectral_apply(s, ScalarFunction::power(2.0)).matrix(), Matrix::identity(2)), 1e-15);
  EXPECT_THROW(spectral_apply(s, ScalarFunction::power(0.5)), DomainError);
  EXPECT_THROW(spectral_apply(s, ScalarFunction::log()), DomainError);
}

TEST(MatLog, AgreesWithIntegralRepresentation) {
  SplitMix64 rng(22);
  const auto& rule = cached_gauss_legendre(128);
  for (int i = 0; i < 20; ++i) {
    const SpdMatrix a = random_spd_matrix(rng, 1 + rng.index(5), 30.0);
    const Matrix spectral = mat_log(a).matrix();
    EXPECT_LT(diff(spectral, mat_log_integral(a, rule).matrix()), 1e-11 * std::max(1.0, frob_norm(spectral)));
  }
}

TEST(MatLog, ExpInvertsLog) {
  SplitMix64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const SpdMatrix a = random_spd_matrix(rng, 1 + rng.index(5), 50.0);
    const Matrix back = mat_exp(mat_log(a)).matrix();
    EXPECT_LT(diff(back, a.matrix()), 1e-13 * frob_norm(a.matrix()));
  }
}

TEST(MatExp, SeriesMatchesSpectral) {
  SplitMix64 rng(24);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + rng.index(5);
    Matrix m = random_matrix(rng, n);
    const SymMatrix s((m + m.transpose()) * 0.5);
    const Matrix e = mat_exp(s).matrix();
    EXPECT_LT(diff(mat_exp_series(s).matrix(), e), 1e-13 * frob_norm(e));
  }
}

TEST(MatExp, SeriesOnNonSymmetricClosedForms) {
  // nilpotent: exp(N) = I + N
  const Matrix n{{0, 1}, {0, 0}};
  EXPECT_LT(diff(exp_series(n), Matrix{{1, 1}, {0, 1}}), 1e-16);
  // rotation generator
  const double th = 0.7;
  const Matrix r = exp_series(Matrix{{0, -th}, {th, 0}});
  EXPECT_LT(diff(r, Matrix{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}}), 1e-15);
  // exp(a I + b N) = e^a (I + b N)
  const Matrix m = exp_series(Matrix{{1.0, 2.0}, {0.0, 1.0}});
  EXPECT_LT(diff(m, std::numbers::e * Matrix{{1, 2}, {0, 1}}), 1e-14);
  EXPECT_THROW(exp_series(Matrix(2, 3)), DimensionError);
}

TEST(NormBounds, HoldOnRandomMatrices) {
  SplitMix64 rng(25);
  for (int i = 0; i < 200; ++i) {
    const SpdMatrix a = random_spd_matrix(rng, 1 + rng.index(6), std::exp(rng.uniform(0.0, 6.0)));
    const double alpha = rng.uniform(-3.0, 3.0);
    const auto set = norm_power_bounds(a, alpha);
    EXPECT_TRUE(set.passed()) << "alpha=" << alpha;
    EXPECT_EQ(set.reports.size(), alpha >= 0.0 ? 4u : 3u);
  }
}

TEST(NormBounds, ZeroExponentCoversBothFamilies) {
  const auto set = norm_power_bounds(SpdMatrix::identity(3), 0.0);
  EXPECT_EQ(set.reports.size(), 5u);
  EXPECT_TRUE(set.passed());
}

TEST(NormBounds, TightCases) {
  // I_d: |A| = sqrt(d), <A,I> = d = sqrt(d)|A|
  const auto id = norm_power_bounds(SpdMatrix::identity(4), 2.0);
  EXPECT_NEAR(id.at("trace_upper").margin, 0.0, 1e-14);
  // rank-one-like: trace lower bound nearly tight
  const auto r1 = norm_power_bounds(SpdMatrix::diagonal({1.0, 1e-9}), 1.0);
  EXPECT_NEAR(r1.at("trace_lower").margin, 1e-9, 1e-15);
  EXPECT_THROW(r1.at("missing"), std::out_of_range);
}
