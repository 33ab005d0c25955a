#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "spdcalc/conjugation_average.hpp"
#include "spdcalc/curve.hpp"
#include "spdcalc/errors.hpp"
#include "spdcalc/frechet.hpp"
#include "spdcalc/matrix.hpp"
#include "spdcalc/matrix_functions.hpp"
#include "spdcalc/quadrature.hpp"
#include "spdcalc/report.hpp"
#include "spdcalc/symmetric.hpp"

namespace spdcalc {

struct CheckOptions {
  /// Method used for every D^lambda A evaluation.
  DerivMethod method = DerivMethod::divided_difference;
  /// Method for the right-hand side of the identity <D^a A, A^b> = <D^(a+b) A, I>,
  /// so that the two sides come from independent evaluation paths.
  DerivMethod cross_method = DerivMethod::quadrature;
  int quad_order = kDefaultQuadratureOrder;
  double rel_slack = kDefaultRelSlack;
};

/// Exponents (alpha, beta, gamma, delta) and weights p, q >= 0 with p + q > 0.
struct ExponentTuple {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double p = 1.0;
  double q = 0.0;

  void validate() const {
    if (!(p >= 0.0) || !(q >= 0.0) || !(p + q > 0.0)) {
      throw InvalidArgument("ExponentTuple: need p >= 0, q >= 0 and p + q > 0");
    }
  }

  /// ((alpha + beta) p + (gamma + delta) q) / (2p + 2q)
  double mean_exponent() const {
    return ((alpha + beta) * p + (gamma + delta) * q) / (2.0 * p + 2.0 * q);
  }
};

/// A(t), A'(t) and the normalized power derivatives at one point of a curve.
class CurvePoint {
 public:
  CurvePoint(const MatrixCurve& c, double t, const CheckOptions& opt)
      : curve_(&c), t_(t), opt_(opt), a_(c.value(t)), da_(curve_derivative(c, t)) {}

  const SpdMatrix& value() const noexcept { return a_; }
  const SymMatrix& derivative() const noexcept { return da_; }
  double t() const noexcept { return t_; }
  std::size_t dim() const noexcept { return a_.dim(); }

  /// D^lambda A
  Matrix d(double lambda) const { return d(lambda, opt_.method); }

  Matrix d(double lambda, DerivMethod method) const {
    if (method == DerivMethod::finite_difference) {
      return d_lambda(*curve_, t_, lambda, method, opt_.quad_order).matrix;
    }
    return d_lambda_at(a_, da_, lambda, method, opt_.quad_order).matrix;
  }

  /// Plain power derivative (A^lambda)' = lambda D^lambda A.
  Matrix d_power(double lambda) const {
    if (lambda == 0.0) return Matrix(dim(), dim());
    return d(lambda) * lambda;
  }

 private:
  const MatrixCurve* curve_;
  double t_;
  CheckOptions opt_;
  SpdMatrix a_;
  SymMatrix da_;
};

namespace detail {

inline void tag(InequalityReport& r, double t, std::size_t d, const CheckOptions& opt) {
  r.context["t"] = t;
  r.context["d"] = static_cast<double>(d);
  r.note = to_string(opt.method);
}

}  // namespace detail

/// <D^a A, A^b> = <D^(a+b) A, I>
inline InequalityReport check_gengen(const MatrixCurve& c, double t, double alpha, double beta,
                                     const CheckOptions& opt = {}) {
  const CurvePoint pt(c, t, opt);
  const Matrix da = pt.d(alpha);
  const Matrix a_beta = mat_pow(pt.value(), beta).matrix();
  const Matrix dsum = pt.d(alpha + beta, opt.cross_method);
  const double lhs = frob_inner(da, a_beta);
  const double rhs = trace(dsum);
  const double scale = std::max(frob_norm(da) * frob_norm(a_beta),
                                frob_norm(dsum) * std::sqrt(static_cast<double>(pt.dim())));
  InequalityReport r = make_identity("gengen", lhs, rhs, opt.rel_slack, scale);
  detail::tag(r, t, pt.dim(), opt);
  r.context["alpha"] = alpha;
  r.context["beta"] = beta;
  return r;
}

inline double log_det(const SpdMatrix& a) {
  double s = 0.0;
  for (double l : a.eigen().lambda) s += std::log(l);
  return s;
}

inline constexpr double kLogDetStep = 2e-3;

/// (log det A)'(t) by the eighth-order central stencil with step kLogDetStep;
/// the determinant is the eigenvalue product.
inline double log_det_derivative(const MatrixCurve& c, double t) {
  static constexpr double w[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const double h = kLogDetStep;
  c.require_in_domain(t - 4.0 * h);
  c.require_in_domain(t + 4.0 * h);
  double s = 0.0;
  for (int k = 1; k <= 4; ++k) s += w[k - 1] * (log_det(c.value(t + k * h)) - log_det(c.value(t - k * h)));
  return s / h;
}

/// <A', A^{-1}> = (log det A)'
inline InequalityReport check_jacobi(const MatrixCurve& c, double t, const CheckOptions& opt = {}) {
  const SpdMatrix a = c.value(t);
  const SymMatrix da = curve_derivative(c, t);
  const Matrix inv = mat_pow(a, -1.0).matrix();
  const double lhs = frob_inner(da, inv);
  const double rhs = log_det_derivative(c, t);
  InequalityReport r =
      make_identity("jacobi", lhs, rhs, opt.rel_slack, frob_norm(da) * frob_norm(inv));
  detail::tag(r, t, a.dim(), opt);
  r.note = "finite_difference";
  return r;
}

/// <D^a A, D^b A> >= |D^((a+b)/2) A|^2
inline InequalityReport check_cox(const MatrixCurve& c, double t, double alpha, double beta,
                                  const CheckOptions& opt = {}) {
  const CurvePoint pt(c, t, opt);
  const double lhs = frob_inner(pt.d(alpha), pt.d(beta));
  const double rhs = frob_norm_sq(pt.d(0.5 * (alpha + beta)));
  InequalityReport r = make_inequality("cox", lhs, rhs, lhs - rhs, opt.rel_slack);
  detail::tag(r, t, pt.dim(), opt);
  r.context["alpha"] = alpha;
  r.context["beta"] = beta;
  return r;
}

namespace detail {

inline bool is_integer(double v) { return v == std::floor(v); }

/// base^e with 0^0 = 1; NaN when a negative base meets a fractional exponent.
inline double real_power(double base, double e) {
  if (e == 0.0) return 1.0;
  if (base < 0.0 && !is_integer(e)) return std::nan("");
  return std::pow(base, e);
}

}  // namespace detail

/// <D^a A, D^b A>^p <D^g A, D^d A>^q >= |D^m A|^(2p+2q),
/// m = ((a+b)p + (g+d)q) / (2p+2q).
inline InequalityReport check_ide0A(const MatrixCurve& c, double t, const ExponentTuple& e,
                                    const CheckOptions& opt = {}) {
  e.validate();
  const CurvePoint pt(c, t, opt);
  const double first = frob_inner(pt.d(e.alpha), pt.d(e.beta));
  const double second = frob_inner(pt.d(e.gamma), pt.d(e.delta));
  const double mid_norm = frob_norm(pt.d(e.mean_exponent()));

  const double lhs = detail::real_power(first, e.p) * detail::real_power(second, e.q);
  const double rhs = std::pow(mid_norm, 2.0 * e.p + 2.0 * e.q);
  InequalityReport r;
  r.name = "ide0A";
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  r.rel_slack = opt.rel_slack;
  if (std::isnan(lhs)) {
    r.status = Status::not_applicable;
    r.margin = 0.0;
    r.note = "negative inner product raised to a fractional power";
  }
  finalize(r);
  detail::tag(r, t, pt.dim(), opt);
  r.context.insert({{"alpha", e.alpha}, {"beta", e.beta}, {"gamma", e.gamma}, {"delta", e.delta},
                    {"p", e.p}, {"q", e.q}, {"inner_ab", first}, {"inner_gd", second}});
  return r;
}

/// <P(x), P(-x)> >= |P(0)|^2
inline InequalityReport check_odh(const SpdMatrix& b, const Matrix& x_dir, double x,
                                  const QuadratureRule& rule, double rel_slack = kDefaultRelSlack) {
  const double lhs = frob_inner(p_of_x(b, x_dir, x, rule), p_of_x(b, x_dir, -x, rule));
  const double rhs = frob_norm_sq(p_of_x(b, x_dir, 0.0, rule));
  InequalityReport r = make_inequality("odh", lhs, rhs, lhs - rhs, rel_slack);
  r.context = {{"x", x}, {"d", static_cast<double>(b.dim())}};
  return r;
}

inline InequalityReport check_odh(const SpdMatrix& b, const Matrix& x_dir, double x,
                                  double rel_slack = kDefaultRelSlack) {
  return check_odh(b, x_dir, x, cached_gauss_legendre(kDefaultQuadratureOrder), rel_slack);
}

/// <(A^a)', (A^b)'> <= |(A^((a+b)/2))'|^2 with plain power derivatives; for
/// ab <= 0 the left side must in addition be non-positive.
inline InequalityReport check_reverse(const MatrixCurve& c, double t, double alpha, double beta,
                                      const CheckOptions& opt = {}) {
  const CurvePoint pt(c, t, opt);
  const double lhs = frob_inner(pt.d_power(alpha), pt.d_power(beta));
  const double rhs = frob_norm_sq(pt.d_power(0.5 * (alpha + beta)));
  InequalityReport r = make_inequality("reverse", lhs, rhs, rhs - lhs, opt.rel_slack);
  detail::tag(r, t, pt.dim(), opt);
  r.context["alpha"] = alpha;
  r.context["beta"] = beta;
  if (alpha * beta <= 0.0) {
    r.context["nonpositive_branch"] = 1.0;
    if (r.status == Status::pass && lhs > r.slack()) {
      r.status = Status::fail;
      r.note += "; left side positive although alpha*beta <= 0";
    }
  }
  return r;
}

/// Number of ways to write s = v + w with v in {0..b}, w in {0..a}:
/// min{b,s} + min{a,s} - s + 1 inside 0 <= s <= a + b, zero outside.
inline int decomposition_count(int b, int a, int s) {
  if (s < 0 || s > a + b || a < 0 || b < 0) return 0;
  return std::min(b, s) + std::min(a, s) - s + 1;
}

/// (B^n)' = sum_{i<n} B^i B' B^(n-1-i), integer powers by repeated products.
inline Matrix power_derivative_product_rule(const Matrix& b, const Matrix& db, int n) {
  if (n < 0) throw InvalidArgument("power_derivative_product_rule: negative exponent");
  const std::size_t d = b.rows();
  if (n == 0) return Matrix(d, d);
  std::vector<Matrix> powers{Matrix::identity(d)};
  for (int k = 1; k < n; ++k) powers.push_back(powers.back() * b);
  Matrix out(d, d);
  for (int i = 0; i < n; ++i) out += powers[i] * db * powers[n - 1 - i];
  return out;
}

/// Product-rule expansion behind the reverse inequality:
///   <(B^2q)', (B^2p)'> = sum_s Q(2q-1, 2p-1, s) |B^(s/2) B' B^(p+q-1-s/2)|^2
///   |(B^(p+q))'|^2     = sum_s Q(p+q-1, p+q-1, s) |B^(s/2) B' B^(p+q-1-s/2)|^2
/// plus the termwise comparison Q(2q-1, 2p-1, s) <= Q(p+q-1, p+q-1, s).
inline ReportSet power_expansion_identity(const MatrixCurve& c, double t, int p, int q,
                                          double rel_slack = kDefaultRelSlack) {
  if (p < 1 || q < 1 || p > 6 || q > 6) {
    throw InvalidArgument("power_expansion_identity: p and q must lie in [1, 6]");
  }
  const SpdMatrix b = c.value(t);
  const SymMatrix db = curve_derivative(c, t);

  const double direct_mixed = frob_inner(power_derivative_product_rule(b, db, 2 * q),
                                         power_derivative_product_rule(b, db, 2 * p));
  const double direct_mid = frob_norm_sq(power_derivative_product_rule(b, db, p + q));

  const int top = 2 * p + 2 * q - 2;
  double expansion_mixed = 0.0;
  double expansion_mid = 0.0;
  int worst_q_gap = top + 2;  // min over s of Q_mid - Q_mixed
  for (int s = 0; s <= top; ++s) {
    const Matrix left = mat_pow(b, 0.5 * s).matrix();
    const Matrix right = mat_pow(b, p + q - 1 - 0.5 * s).matrix();
    const double term = frob_norm_sq(left * db.matrix() * right);
    const int q_mixed = decomposition_count(2 * q - 1, 2 * p - 1, s);
    const int q_mid = decomposition_count(p + q - 1, p + q - 1, s);
    expansion_mixed += q_mixed * term;
    expansion_mid += q_mid * term;
    worst_q_gap = std::min(worst_q_gap, q_mid - q_mixed);
  }

  ReportSet out;
  out.reports.push_back(
      make_identity("power_expansion_mixed", direct_mixed, expansion_mixed, rel_slack));
  out.reports.push_back(make_identity("power_expansion_mid", direct_mid, expansion_mid, rel_slack));
  out.reports.push_back(make_inequality("power_expansion_q_termwise", 0.0, worst_q_gap,
                                        static_cast<double>(worst_q_gap), 0.0, 1.0));
  out.reports.push_back(make_inequality("power_expansion_reverse", direct_mixed, direct_mid,
                                        direct_mid - direct_mixed, rel_slack));
  for (auto& r : out.reports) {
    r.context = {{"t", t}, {"p", static_cast<double>(p)}, {"q", static_cast<double>(q)},
                 {"d", static_cast<double>(b.dim())}};
  }
  return out;
}

/// <A', (A^3)'> / |(A^2)'|^2 computed by the product rule on raw matrices.
/// No symmetry is assumed or enforced.
inline double ratio_r_unchecked(const Matrix& a, const Matrix& da) {
  if (!a.is_square() || !a.same_shape(da)) throw DimensionError("ratio_r: shape mismatch");
  const Matrix d2 = a * da + da * a;
  const Matrix d3 = da * a * a + a * da * a + a * a * da;
  const double denom = frob_norm_sq(d2);
  if (!(denom > kSlackFloor)) throw UndefinedRatioError("ratio_r: (A^2)' vanishes");
  return frob_inner(da, d3) / denom;
}

inline double ratio_r(const RawCurve& c, double t) {
  if (!c.contains(t)) throw DomainError("ratio_r: t outside the curve's domain");
  const Matrix a = c.value(t);
  if (c.tangent) return ratio_r_unchecked(a, (*c.tangent)(t));
  if (!c.derivative) throw InvalidArgument("ratio_r: curve has neither derivative nor tangent");
  return ratio_r_unchecked(a, (*c.derivative)(t));
}

/// r_A(t) for an SPD curve. The ratio is invariant under scaling of A', so a
/// curve's tangent direction is used where the curve supplies one.
inline double ratio_r(const MatrixCurve& c, double t) {
  const SpdMatrix a = c.value(t);
  if (auto dir = c.tangent(t)) return ratio_r_unchecked(a.matrix(), *dir);
  return ratio_r_unchecked(a.matrix(), curve_derivative(c, t).matrix());
}

/// |A'| |(A^3)'| / |(A^2)'|^2
inline double norm_product_ratio(const Matrix& a, const Matrix& da) {
  const Matrix d2 = a * da + da * a;
  const Matrix d3 = da * a * a + a * da * a + a * a * da;
  const double denom = frob_norm_sq(d2);
  if (!(denom > kSlackFloor)) throw UndefinedRatioError("norm_product_ratio: (A^2)' vanishes");
  return frob_norm(da) * frob_norm(d3) / denom;
}

inline double norm_product_ratio(const MatrixCurve& c, double t) {
  return norm_product_ratio(c.value(t).matrix(), curve_derivative(c, t).matrix());
}

/// <D^a A, D^b A> / |D^((a+b)/2) A|^2 with the lambda^{-1}-normalized operator.
inline double normalized_reverse_ratio(const MatrixCurve& c, double t, double alpha, double beta,
                                       const CheckOptions& opt = {}) {
  const CurvePoint pt(c, t, opt);
  const double denom = frob_norm_sq(pt.d(0.5 * (alpha + beta)));
  if (!(denom > kSlackFloor)) throw UndefinedRatioError("normalized_reverse_ratio: denominator vanishes");
  return frob_inner(pt.d(alpha), pt.d(beta)) / denom;
}

/// sqrt(mu(a) mu(b)) >= mu((a+b)/2) with mu(l) = |D^l A|.
inline InequalityReport check_logconvex_midpoint(const MatrixCurve& c, double t, double alpha,
                                                 double beta, const CheckOptions& opt = {}) {
  const CurvePoint pt(c, t, opt);
  const double lhs = std::sqrt(frob_norm(pt.d(alpha)) * frob_norm(pt.d(beta)));
  const double rhs = frob_norm(pt.d(0.5 * (alpha + beta)));
  InequalityReport r = make_inequality("logconvex_midpoint", lhs, rhs, lhs - rhs, opt.rel_slack);
  detail::tag(r, t, pt.dim(), opt);
  r.context["alpha"] = alpha;
  r.context["beta"] = beta;
  return r;
}

/// <X(a), X(b)> >= |X((a+b)/2)|^2 for an arbitrary matrix family X.
inline InequalityReport check_midpoint_inner_product(const MatrixMap& x, double alpha, double beta,
                                                     double rel_slack = kDefaultRelSlack) {
  const double lhs = frob_inner(x(alpha), x(beta));
  const double rhs = frob_norm_sq(x(0.5 * (alpha + beta)));
  InequalityReport r = make_inequality("midpoint_inner_product", lhs, rhs, lhs - rhs, rel_slack);
  r.context = {{"alpha", alpha}, {"beta", beta}};
  return r;
}

/// |A^6| <= |A^3|^2 and |A|^45 <= d^15 |A^3|^15.
inline ReportSet check_pde_chain_steps(const SpdMatrix& a, double rel_slack = kDefaultRelSlack) {
  const double d = static_cast<double>(a.dim());
  const double n1 = frob_norm(a.matrix());
  const double n3 = frob_norm(mat_pow(a, 3.0).matrix());
  const double n6 = frob_norm(mat_pow(a, 6.0).matrix());
  ReportSet out;
  out.reports.push_back(make_inequality("pde_chain_sixth_power", n6, n3 * n3, n3 * n3 - n6, rel_slack));
  const double lhs = std::pow(n1, 45.0);
  const double rhs = std::pow(d, 15.0) * std::pow(n3, 15.0);
  out.reports.push_back(make_inequality("pde_chain_norm_45", lhs, rhs, rhs - lhs, rel_slack));
  for (auto& r : out.reports) r.context = {{"d", d}};
  return out;
}

/// sqrt|A'| <A', (A^6)'> >= 2/sqrt(27) |(A^3)'|^(5/2), the p = 1/4, q = 1,
/// (alpha, beta, gamma, delta) = (1, 1, 1, 6) instance written with plain powers.
inline InequalityReport check_pde_gradient_bound(const MatrixCurve& c, double t,
                                                 const CheckOptions& opt = {}) {
  const CurvePoint pt(c, t, opt);
  const Matrix& da = pt.derivative().matrix();
  const double lhs = std::sqrt(frob_norm(da)) * frob_inner(da, pt.d_power(6.0));
  const double rhs = 2.0 / std::sqrt(27.0) * std::pow(frob_norm(pt.d_power(3.0)), 2.5);
  InequalityReport r = make_inequality("pde_gradient", lhs, rhs, lhs - rhs, opt.rel_slack);
  detail::tag(r, t, pt.dim(), opt);
  return r;
}

}  // namespace spdcalc
