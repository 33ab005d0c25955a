#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "spdcalc/gallery.hpp"
#include "spdcalc/inequalities.hpp"
#include "spdcalc/random.hpp"

using namespace spdcalc;

namespace {

MatrixCurve constant_curve(Matrix m) {
  const std::size_t d = m.rows();
  return MatrixCurve(
      d, -10, 10, [m](double) { return m; }, [d](double) { return Matrix(d, d); });
}

// diag(e^t, e^{3t}); log det = 4t
MatrixCurve diag_exp_curve() {
  return MatrixCurve(
      2, -10, 10, [](double t) { return Matrix{{std::exp(t), 0}, {0, std::exp(3 * t)}}; },
      [](double t) { return Matrix{{std::exp(t), 0}, {0, 3 * std::exp(3 * t)}}; });
}

MatrixCurve scalar_curve(double (*u)(double), double (*du)(double)) {
  return MatrixCurve(
      1, -10, 10, [u](double t) { return Matrix{{u(t)}}; }, [du](double t) { return Matrix{{du(t)}}; });
}

MatrixCurve exp_scalar() {
  return scalar_curve([](double t) { return std::exp(t); }, [](double t) { return std::exp(t); });
}

MatrixCurve sin_scalar() {
  return scalar_curve([](double t) { return 2.0 + std::sin(t); }, [](double t) { return std::cos(t); });
}

double rel_gap(const InequalityReport& r) { return std::abs(r.lhs - r.rhs) / r.slack_scale(); }

}  // namespace

// ---- identities ----

TEST(Gengen, ConstantCurve) {
  const auto c = constant_curve(Matrix{{2, 1}, {1, 3}});
  const auto r = check_gengen(c, 0.0, 1.5, 1.5);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(Gengen, DiagonalExponentialGivesLogDetDerivative) {
  const auto r = check_gengen(diag_exp_curve(), 0.0, 1.0, -1.0);
  EXPECT_NEAR(r.lhs, 4.0, 1e-13);
  EXPECT_NEAR(r.rhs, 4.0, 1e-12);
  EXPECT_TRUE(r.passed());
}

TEST(Gengen, RandomCurvesCrossMethod) {
  SplitMix64 rng(51);
  for (int i = 0; i < 60; ++i) {
    const auto c = random_spd_curve(derive_seed(51, i), 2 + rng.index(4));
    const double t = rng.uniform(-3, 3), a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const auto r = check_gengen(c, t, a, b);
    EXPECT_TRUE(r.passed());
    EXPECT_LE(rel_gap(r), 1e-8) << "a=" << a << " b=" << b;
  }
}

TEST(Jacobi, ConstantAndDiagonal) {
  const auto r0 = check_jacobi(constant_curve(Matrix{{2, 1}, {1, 3}}), 0.5);
  EXPECT_EQ(r0.lhs, 0.0);
  EXPECT_NEAR(r0.rhs, 0.0, 1e-12);
  EXPECT_TRUE(r0.passed());
  const auto r = check_jacobi(diag_exp_curve(), 0.0);
  EXPECT_NEAR(r.lhs, 4.0, 1e-14);
  EXPECT_NEAR(r.rhs, 4.0, 1e-10);
}

TEST(Jacobi, A1AtOne) {
  const auto ex = make_example("A1");
  const auto r = check_jacobi(ex.curve(), 1.0, CheckOptions{.rel_slack = 1e-8});
  EXPECT_TRUE(r.passed());
  EXPECT_LE(rel_gap(r), 1e-8);
  // independent closed form: det = 2 cosh x - 1
  const double want = 2.0 * std::sinh(1.0) / (2.0 * std::cosh(1.0) - 1.0);
  EXPECT_NEAR(r.lhs, want, 1e-14);
  EXPECT_NEAR(log_det_derivative(ex.curve(), 1.0), want, 1e-11);
}

TEST(LogDet, EigenvalueSum) {
  EXPECT_NEAR(log_det(SpdMatrix::diagonal({2.0, 8.0})), std::log(16.0), 1e-15);
}

// ---- Cox-type inequality ----

TEST(Cox, ScalarExponentialIsEquality) {
  for (double a : {-2.0, 0.0, 1.0}) {
    const auto r = check_cox(exp_scalar(), 0.3, a, 2.5);
    EXPECT_TRUE(r.passed());
    EXPECT_LE(std::abs(r.margin), 1e-12 * r.slack_scale());
  }
}

TEST(Cox, CommutingDiagonalCurveIsEquality) {
  const auto c = MatrixCurve(
      3, -5, 5,
      [](double t) { return Matrix::diagonal(std::vector<double>{std::exp(t), 2 + std::sin(t), 1 + t * t}); },
      [](double t) { return Matrix::diagonal(std::vector<double>{std::exp(t), std::cos(t), 2 * t}); });
  for (double t : {-1.0, 0.4, 2.0}) {
    const auto r = check_cox(c, t, -1.5, 2.0);
    EXPECT_LE(std::abs(r.margin), 1e-10 * r.slack_scale());
  }
}

TEST(Cox, A1StrictAtOne) {
  const auto r = check_cox(make_example("A1").curve(), 1.0, 1.0, 3.0);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.margin, 1e-6 * r.slack_scale());
}

// ---- generalized product inequality ----

TEST(Ide0A, SingleFactorReducesToCox) {
  const auto c = random_spd_curve(61, 3);
  for (double a : {-1.0, 0.5, 2.0}) {
    const auto cox = check_cox(c, 0.7, a, a);
    const auto ide = check_ide0A(c, 0.7, ExponentTuple{a, a, 0.0, 0.0, 1.0, 0.0});
    EXPECT_DOUBLE_EQ(ide.lhs, cox.lhs);
    EXPECT_NEAR(ide.rhs, cox.rhs, 1e-14 * cox.rhs);
    EXPECT_TRUE(ide.passed());
  }
}

TEST(Ide0A, QuarterPowerInstanceOnA1) {
  const auto c = make_example("A1").curve();
  const ExponentTuple e{1, 1, 1, 6, 0.25, 1.0};
  EXPECT_DOUBLE_EQ(e.mean_exponent(), (2 * 0.25 + 7) / 2.5);
  EXPECT_TRUE(check_ide0A(c, 1.0, e).passed());
  const auto g = check_pde_gradient_bound(c, 1.0);
  EXPECT_TRUE(g.passed());
  EXPECT_GT(g.margin, 0.0);
}

TEST(Ide0A, ValidatesWeights) {
  const auto c = random_spd_curve(62, 2);
  EXPECT_THROW(check_ide0A(c, 0.0, ExponentTuple{1, 1, 1, 1, 0, 0}), InvalidArgument);
  EXPECT_THROW(check_ide0A(c, 0.0, ExponentTuple{1, 1, 1, 1, -1, 2}), InvalidArgument);
}

TEST(Ide0A, FractionalPowerOfNegativeBase) {
  EXPECT_TRUE(std::isnan(detail::real_power(-0.5, 0.25)));
  EXPECT_EQ(detail::real_power(-2.0, 3.0), -8.0);
  EXPECT_EQ(detail::real_power(-2.0, 0.0), 1.0);
  EXPECT_EQ(detail::real_power(0.0, 0.0), 1.0);
}

// ---- convexity along conjugation ----

TEST(Odh, CommutingDirectionAndZero) {
  SplitMix64 rng(71);
  const SpdMatrix b = random_spd_matrix(rng, 3, 10.0);
  const auto rc = check_odh(b, b.matrix(), 0.7);
  EXPECT_LE(std::abs(rc.margin), 1e-12 * rc.slack_scale());
  const Matrix x = random_matrix(rng, 3);
  const auto r0 = check_odh(b, x, 0.0);
  EXPECT_LE(std::abs(r0.margin), 1e-14 * r0.slack_scale());
}

TEST(Odh, JensenEndpoints) {
  SplitMix64 rng(72);
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = 2 + rng.index(3);
    const SpdMatrix b = random_spd_matrix(rng, d, 20.0);
    const Matrix x = random_matrix(rng, d);
    for (double s : {-1.0, 1.0}) {
      const auto r = check_odh(b, x, s);
      EXPECT_TRUE(r.passed());
      EXPECT_GE(r.margin, 0.0);
    }
  }
}

TEST(Odh, RuleOverloadMatchesDefault) {
  const SpdMatrix b = SpdMatrix::diagonal({0.5, 4.0});
  const Matrix x{{0, 1}, {2, 0}};
  EXPECT_DOUBLE_EQ(check_odh(b, x, 0.4).lhs, check_odh(b, x, 0.4, cached_gauss_legendre(64)).lhs);
}

// ---- reverse inequality with plain powers ----

TEST(Reverse, ScalarEqualityOnlyOnDiagonal) {
  const auto c = sin_scalar();
  const auto eq = check_reverse(c, 0.4, 2.0, 2.0);
  EXPECT_LE(std::abs(eq.margin), 1e-12 * eq.slack_scale());
  // off the diagonal the sides differ by the factor ab / ((a+b)/2)^2
  for (auto [a, b] : {std::pair{1.0, 3.0}, std::pair{-1.0, 2.0}, std::pair{0.5, 2.5}}) {
    const auto r = check_reverse(c, 0.4, a, b);
    const double factor = a * b / (0.25 * (a + b) * (a + b));
    EXPECT_NEAR(r.lhs, factor * r.rhs, 1e-13 * r.slack_scale());
    EXPECT_TRUE(r.passed());
  }
}

TEST(Reverse, A4RatioAtZero) {
  const auto ex = make_example("A4", {{"m", 3.0}});
  EXPECT_NEAR(ratio_r(ex.curve(), 0.0), 13.0 / 16.0, 1e-15);
  const auto r = check_reverse(ex.curve(), 0.0, 1.0, 3.0);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.lhs / r.rhs, 13.0 / 16.0, 1e-14);
}

TEST(Reverse, NonPositiveBranch) {
  const auto ex = make_example("A4", {{"m", 3.0}});
  const auto r = check_reverse(ex.curve(), 0.2, 1.0, -1.0);
  EXPECT_TRUE(r.passed());
  EXPECT_LT(r.lhs, 0.0);
  EXPECT_EQ(r.context.at("nonpositive_branch"), 1.0);
  // the normalized operator flips the sign and the ratio is the closed form
  const double m = 3.0, l = std::log(m);
  EXPECT_NEAR(normalized_reverse_ratio(ex.curve(), 0.0, 1.0, -1.0), (m - 1) * (m - 1) / (m * l * l), 1e-12);
}

// ---- product-rule expansion ----

TEST(PowerExpansion, DecompositionCounts) {
  EXPECT_EQ(decomposition_count(1, 3, 2), 2);
  EXPECT_EQ(decomposition_count(1, 3, -1), 0);
  EXPECT_EQ(decomposition_count(1, 3, 5), 0);
  // brute force on small ranges
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int s = -1; s <= a + b + 1; ++s) {
        int n = 0;
        for (int v = 0; v <= b; ++v)
          for (int w = 0; w <= a; ++w) n += v + w == s;
        EXPECT_EQ(decomposition_count(b, a, s), n);
      }
}

TEST(PowerExpansion, ProductRuleMatchesSpectralDerivative) {
  const auto c = random_spd_curve(81, 3);
  const CurvePoint pt(c, 0.3, {});
  for (int n : {1, 2, 3, 5}) {
    const Matrix pr = power_derivative_product_rule(pt.value().matrix(), pt.derivative().matrix(), n);
    EXPECT_LT(frob_norm(pr - pt.d_power(n)), 1e-11 * frob_norm(pr));
  }
  EXPECT_EQ(power_derivative_product_rule(pt.value().matrix(), pt.derivative().matrix(), 0), Matrix(3, 3));
  EXPECT_THROW(power_derivative_product_rule(pt.value().matrix(), pt.derivative().matrix(), -1),
               InvalidArgument);
}

TEST(PowerExpansion, SymmetricCaseAndRandom) {
  const auto c = random_spd_curve(82, 3);
  const auto sym = power_expansion_identity(c, 0.1, 1, 1);
  EXPECT_TRUE(sym.passed());
  EXPECT_DOUBLE_EQ(sym.at("power_expansion_mixed").lhs, sym.at("power_expansion_mid").lhs);
  for (int i = 0; i < 10; ++i) {
    const auto r = power_expansion_identity(random_spd_curve(derive_seed(83, i), 2 + i % 3), 0.5, 1, 2);
    EXPECT_TRUE(r.passed());
    EXPECT_LE(rel_gap(r.at("power_expansion_mixed")), 1e-9);
    EXPECT_LE(rel_gap(r.at("power_expansion_mid")), 1e-9);
  }
  EXPECT_THROW(power_expansion_identity(c, 0.0, 0, 1), InvalidArgument);
  EXPECT_THROW(power_expansion_identity(c, 0.0, 1, 7), InvalidArgument);
}

// ---- the ratio r ----

TEST(RatioR, ScalarIsThreeQuarters) {
  for (double t : {-2.0, 0.5, 1.0}) {
    EXPECT_NEAR(ratio_r(sin_scalar(), t), 0.75, 1e-15);
    EXPECT_NEAR(ratio_r_unchecked(Matrix{{-3.0}}, Matrix{{t + 5}}), 0.75, 1e-15);
  }
}

TEST(RatioR, A1ClosedForm) {
  const auto ex = make_example("A1");
  EXPECT_NEAR(ratio_r(ex.curve(), 0.0), 5.0 / 6.0, 1e-15);
  for (double x : {-2.0, 0.3, 1.0, 4.0}) {
    const double c = std::cosh(x);
    EXPECT_NEAR(ratio_r(ex.curve(), x), 0.75 + 1.0 / (4.0 + 8.0 * c * c), 1e-15);
  }
}

TEST(RatioR, NonSymmetricA3) {
  const auto ex = make_example("A3", {{"k", 3.0}});
  EXPECT_NEAR(ratio_r(ex.raw(), 0.0), 3.0 / 13.0, 1e-15);
  EXPECT_LT(ratio_r(ex.raw(), 0.0), 0.75);
}

TEST(RatioR, UndefinedWhenDerivativeVanishes) {
  const auto c = constant_curve(Matrix{{2, 0}, {0, 1}});
  EXPECT_THROW(ratio_r(c, 0.0), UndefinedRatioError);
  EXPECT_THROW(norm_product_ratio(c, 0.0), UndefinedRatioError);
  EXPECT_THROW(ratio_r_unchecked(Matrix(2, 2), Matrix(3, 3)), DimensionError);
  // A1 at x = 0 has A' = 0 but a tangent direction
  EXPECT_NO_THROW(ratio_r(make_example("A1").curve(), 0.0));
}

// ---- log-convexity and its counter-matrix ----

TEST(LogConvex, ScalarEquality) {
  const auto r = check_logconvex_midpoint(sin_scalar(), 0.9, -1.0, 3.0);
  EXPECT_LE(std::abs(r.margin), 1e-12 * r.slack_scale());
}

TEST(LogConvex, CounterMatrixIsLogConvexButViolatesInnerProduct) {
  const auto ex = make_example("Xcounter");
  const MatrixMap x = ex.raw().value;
  for (double l : {-1.0, 0.0, 2.0}) EXPECT_NEAR(frob_norm(x(l)), std::cosh(l), 1e-15 * std::cosh(l));
  // sqrt(cosh 0 cosh 2) >= cosh 1
  EXPECT_GE(std::sqrt(std::cosh(0.0) * std::cosh(2.0)), std::cosh(1.0));
  const auto r = check_midpoint_inner_product(x, 0.0, 2.0);
  EXPECT_FALSE(r.passed());
  EXPECT_NEAR(r.lhs, 1.0, 1e-15);
  EXPECT_NEAR(r.rhs, std::cosh(1.0) * std::cosh(1.0), 1e-14);
}

// ---- chain steps ----

TEST(PdeChain, IdentityAndDiagonal) {
  for (std::size_t d : {1, 2, 3}) {
    const auto s = check_pde_chain_steps(SpdMatrix::identity(d));
    EXPECT_TRUE(s.passed());
    // both sides of the 45th-power step are d^22.5
    EXPECT_LE(std::abs(s.at("pde_chain_norm_45").margin), 1e-12 * s.at("pde_chain_norm_45").slack_scale());
  }
  const auto s = check_pde_chain_steps(SpdMatrix::diagonal({2.0, 0.5}));
  for (const auto& r : s.reports) EXPECT_GT(r.margin, 0.0) << r.name;
}

TEST(PdeChain, RandomMatrices) {
  SplitMix64 rng(91);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dims[] = {2, 3, 5};
    const SpdMatrix a = random_spd_matrix(rng, dims[rng.index(3)], std::exp(rng.uniform(0, 4)));
    ASSERT_TRUE(check_pde_chain_steps(a).passed());
  }
}

// ---- d = 1 invariants ----

TEST(ScalarInvariants, IdentitiesHoldToMachinePrecision) {
  for (const auto& c : {exp_scalar(), sin_scalar()}) {
    for (double t : {-1.0, 0.3, 1.7}) {
      for (double a : {-3.0, -1.0, -0.5, 0.5, 2.0}) {
        const auto g = check_gengen(c, t, a, 1.0 - a);
        EXPECT_LE(rel_gap(g), 1e-12);
        const auto cox = check_cox(c, t, a, a);
        EXPECT_LE(std::abs(cox.margin), 1e-12 * cox.slack_scale());
        if (a != -1.0) {
          // <Du, D(u^a)> = 4a/(a+1)^2 |D u^((a+1)/2)|^2
          const CurvePoint pt(c, t, {});
          const double lhs = frob_inner(pt.d_power(1.0), pt.d_power(a));
          const double rhs = 4.0 * a / ((a + 1) * (a + 1)) * frob_norm_sq(pt.d_power(0.5 * (a + 1)));
          EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
        }
      }
    }
  }
}

TEST(ScalarBaseline, AllFunctionsAndExponents) {
  for (const auto& id : scalar_baseline_ids()) {
    for (double a : {-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0}) {
      for (double t : {-1.5, 0.0, 0.25, 2.0}) {
        const auto s = scalar_baseline(id, a, t);
        for (const auto& r : s.reports) {
          EXPECT_TRUE(r.passed()) << id << " a=" << a << " t=" << t << " " << r.name;
          EXPECT_LE(std::abs(r.margin), 1e-12 * r.slack_scale());
        }
      }
    }
  }
  EXPECT_THROW(scalar_baseline("cos", 1.0, 0.0), InvalidArgument);
}

// ---- randomized properties ----

TEST(Properties, RandomCurvesSatisfyAllInequalities) {
  SplitMix64 rng(101);
  for (int i = 0; i < 80; ++i) {
    const std::size_t dims[] = {2, 3, 5};
    const auto c = random_spd_curve(derive_seed(101, i), dims[i % 3]);
    const double t = rng.uniform(-3, 3);
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const double g = rng.uniform(-3, 3), d = rng.uniform(-3, 3);
    EXPECT_TRUE(check_cox(c, t, a, b).passed());
    EXPECT_TRUE(check_logconvex_midpoint(c, t, a, b).passed());
    EXPECT_TRUE(check_reverse(c, t, a, b).passed());
    const auto ide = check_ide0A(c, t, ExponentTuple{a, b, g, d, rng.uniform(0, 2), rng.uniform(0, 2)});
    EXPECT_NE(ide.status, Status::fail);
    EXPECT_TRUE(check_pde_gradient_bound(c, t).passed());
    EXPECT_TRUE(check_jacobi(c, t, CheckOptions{.rel_slack = 1e-8}).passed());
  }
}

TEST(Properties, MethodChoiceDoesNotChangeVerdicts) {
  const auto c = random_spd_curve(111, 3);
  const CheckOptions quad{.method = DerivMethod::quadrature, .cross_method = DerivMethod::divided_difference};
  const auto a = check_cox(c, 0.2, -1.0, 2.0);
  const auto b = check_cox(c, 0.2, -1.0, 2.0, quad);
  EXPECT_NEAR(a.lhs, b.lhs, 1e-10 * a.lhs);
  EXPECT_EQ(a.note, "divided_difference");
  EXPECT_EQ(b.note, "quadrature");
}
