#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "spdcalc/quadrature.hpp"

using namespace spdcalc;

TEST(GaussLegendre, TwoPointRule) {
  const auto r = gauss_legendre(2);
  const double off = 0.5 / std::sqrt(3.0);
  EXPECT_NEAR(r.nodes()[0], 0.5 - off, 1e-16);
  EXPECT_NEAR(r.nodes()[1], 0.5 + off, 1e-16);
  EXPECT_NEAR(r.weights()[0], 0.5, 1e-16);
  EXPECT_NEAR(r.weights()[1], 0.5, 1e-16);
}

TEST(GaussLegendre, ThreePointRule) {
  const auto r = gauss_legendre(3);
  const double off = 0.5 * std::sqrt(0.6);
  EXPECT_NEAR(r.nodes()[0], 0.5 - off, 1e-16);
  EXPECT_EQ(r.nodes()[1], 0.5);
  EXPECT_NEAR(r.weights()[0], 5.0 / 18.0, 1e-16);
  EXPECT_NEAR(r.weights()[1], 8.0 / 18.0, 1e-16);
}

TEST(GaussLegendre, NodesAscendAndWeightsSumToOne) {
  for (int n : {1, 5, 16, 64, 128, 256}) {
    const auto r = gauss_legendre(n);
    ASSERT_EQ(r.order(), n);
    for (int i = 1; i < n; ++i) EXPECT_LT(r.nodes()[i - 1], r.nodes()[i]);
    for (double s : r.nodes()) {
      EXPECT_GT(s, 0.0);
      EXPECT_LT(s, 1.0);
    }
    const double sum = std::accumulate(r.weights().begin(), r.weights().end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-14) << n;
    // mirror symmetry about 1/2
    for (int i = 0; i < n; ++i) EXPECT_NEAR(r.nodes()[i] + r.nodes()[n - 1 - i], 1.0, 1e-15);
  }
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  for (int n : {1, 2, 4, 8, 16}) {
    const auto r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double v = integrate(r, [k](double s) { return std::pow(s, k); });
      EXPECT_NEAR(v, 1.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
    }
    if (n <= 4) {
      // one degree higher is not exact
      const double v = integrate(r, [n](double s) { return std::pow(s, 2 * n); });
      EXPECT_GT(std::abs(v - 1.0 / (2 * n + 1)), 1e-6);
    }
  }
}

TEST(GaussLegendre, RejectsBadOrder) {
  EXPECT_THROW(gauss_legendre(0), InvalidArgument);
  EXPECT_THROW(gauss_legendre(kMaxQuadratureOrder + 1), InvalidArgument);
  EXPECT_THROW(QuadratureRule({}, {}), InvalidArgument);
}

TEST(GaussLegendre, CachedRuleMatchesFresh) {
  const auto& a = cached_gauss_legendre(64);
  const auto& b = cached_gauss_legendre(64);
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(a.nodes(), gauss_legendre(64).nodes());
}

TEST(Integrate, SmoothScalarIntegrands) {
  const auto& r = cached_gauss_legendre(64);
  EXPECT_NEAR(integrate(r, [](double s) { return std::exp(s); }), std::exp(1.0) - 1.0, 1e-15);
  EXPECT_NEAR(integrate(r, [](double s) { return 1.0 / (1.0 + s); }), std::log(2.0), 1e-15);
  EXPECT_NEAR(integrate_square(r, [](double s, double t) { return s * t; }), 0.25, 1e-15);
  EXPECT_NEAR(integrate_square(r, [](double s, double t) { return (s - t) * (s - t); }), 1.0 / 6.0,
              1e-15);
}

TEST(Integrate, MatrixValued) {
  const auto& r = cached_gauss_legendre(16);
  const Matrix v = integrate(r, [](double s) { return Matrix{{1.0, s}, {s * s, 3.0}}; });
  EXPECT_NEAR(v(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(v(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(v(1, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(v(1, 1), 3.0, 1e-15);
}

TEST(IntegrateAdaptive, ConvergesOnSmoothIntegrand) {
  const auto res = integrate_adaptive([](double s) { return std::cos(10.0 * s); });
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.order, 2 * kDefaultQuadratureOrder);
  EXPECT_NEAR(res.value, std::sin(10.0) / 10.0, 1e-15);
}

TEST(IntegrateAdaptive, ReportsNonConvergence) {
  // integrable endpoint singularity: Gauss rules converge only algebraically
  const auto res = integrate_adaptive([](double s) { return 1.0 / std::sqrt(s); }, 8);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.order, kMaxQuadratureOrder);
}
