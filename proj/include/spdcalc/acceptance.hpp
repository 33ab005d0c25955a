#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spdcalc/conjugation_average.hpp"
#include "spdcalc/figure.hpp"
#include "spdcalc/frechet.hpp"
#include "spdcalc/gallery.hpp"
#include "spdcalc/inequalities.hpp"
#include "spdcalc/matrix_functions.hpp"
#include "spdcalc/random.hpp"
#include "spdcalc/sweep.hpp"

namespace spdcalc {

/// Minimum of r_{A2} on the 601-point grid over [-3, 3], frozen from the
/// first run. The grid contains x = 0, where A2 = I and r equals 3/4 exactly.
inline constexpr double kFigure1GoldenMin = 0.75;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<CriterionResult()> run;
};

namespace acceptance {

inline double rel_err(double value, double expected) {
  return std::abs(value - expected) / std::max(std::abs(expected), kSlackFloor);
}

/// Accumulates named sub-checks into one result.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    if (!ok) failed_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }

  CriterionResult result(int id, const std::string& title) const {
    std::string detail;
    for (const auto& n : notes_) detail += (detail.empty() ? "" : "; ") + n;
    for (const auto& f : failed_) detail += (detail.empty() ? "FAILED " : "; FAILED ") + f;
    return {id, title, ok_, detail};
  }

 private:
  bool ok_ = true;
  std::vector<std::string> notes_;
  std::vector<std::string> failed_;
};

inline std::string num(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline int sweep_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(std::min(n, 8u));
}

inline CriterionResult c01() {
  Tally t;
  const auto ex = make_example("A1");
  const Grid grid{-3.0, 3.0, 241};
  double worst = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.at(i);
    worst = std::max(worst, rel_err(ratio_r(ex.curve(), x), ex.closed_form()->value(x)));
  }
  const double r0 = ratio_r(ex.curve(), 0.0);
  t.note("max rel err " + num(worst, 3) + ", r(0) = " + num(r0, 17));
  t.check(worst <= 1e-8, "closed form on 241 points");
  t.check(rel_err(r0, 5.0 / 6.0) <= 1e-8, "r(0) = 5/6");
  return t.result(1, "ratio r for A1 matches 3/4 + 1/(4 + 8 cosh^2 x)");
}

inline CriterionResult c02() {
  Tally t;
  const Series s = figure1_series(Grid{-3.0, 3.0, 601});
  const double mn = s.min();
  t.note("min r = " + num(mn, 17) + " at x = " + num(s.x[s.argmin()], 6));
  t.check(mn > 0.75, "min > 0.75 (strict)");
  t.check(mn - 0.75 <= 0.05, "min - 0.75 <= 0.05");
  t.check(std::abs(mn - kFigure1GoldenMin) <= 1e-12, "min equals frozen golden value");
  return t.result(2, "r for A2 on [-3, 3], 601 points stays above and approaches 3/4");
}

inline CriterionResult c03() {
  Tally t;
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const auto ex = make_example("A3", {{"k", static_cast<double>(k)}});
    worst = std::max(worst, rel_err(ratio_r(ex.raw(), 0.0), 3.0 / (4.0 + k * k)));
  }
  t.note("k = 1..8 max rel err " + num(worst, 3));
  t.check(worst <= 1e-10, "r(0) = 3/(4 + k^2) for k = 1..8");
  const double r100 = ratio_r(make_example("A3", {{"k", 100.0}}).raw(), 0.0);
  t.note("r(0) at k = 100 is " + num(r100, 6));
  t.check(r100 <= 3.1e-4, "k = 100 value <= 3.1e-4");
  double prev = 1.0;
  bool monotone = true;
  for (int k = 1; k <= 128; k *= 2) {
    const double r = ratio_r(make_example("A3", {{"k", static_cast<double>(k)}}).raw(), 0.0);
    monotone = monotone && r < prev && r < 0.75;
    prev = r;
  }
  t.check(monotone, "monotone decrease below 3/4 over k = 1, 2, 4, ..., 128");
  return t.result(3, "non-symmetric A3: r(0) = 3/(4 + k^2) falls below 3/4 and tends to 0");
}

inline CriterionResult c04() {
  Tally t;
  double worst = 0.0;
  double at1000 = 0.0;
  for (double m : {3.0, 10.0, 100.0, 1000.0}) {
    const double r = ratio_r(make_example("A4", {{"m", m}}).curve(), 0.0);
    worst = std::max(worst, rel_err(r, (m * m + m + 1.0) / ((m + 1.0) * (m + 1.0))));
    if (m == 1000.0) at1000 = r;
  }
  t.note("max rel err " + num(worst, 3) + ", r(0) at m = 1000 is " + num(at1000, 8));
  t.check(worst <= 1e-10, "r(0) = (m^2 + m + 1)/(m + 1)^2");
  t.check(at1000 >= 0.998, "r(0) >= 0.998 at m = 1000");
  return t.result(4, "A4: r(0) = (m^2 + m + 1)/(m + 1)^2 approaches 1");
}

inline CriterionResult c05() {
  Tally t;
  double worst = 0.0;
  double at100 = 0.0;
  double at1e4 = 0.0;
  for (double m : {2.0, 10.0, 100.0, 1e4}) {
    const double v = norm_product_ratio(make_example("A5", {{"m", m}}).curve(), std::numbers::pi / 2.0);
    worst = std::max(worst, rel_err(v, std::sqrt(2.0 * m * m + 16.0 * m + 229.0) / 18.0));
    if (m == 100.0) at100 = v;
    if (m == 1e4) at1e4 = v;
  }
  t.note("max rel err " + num(worst, 3) + ", value at m = 100 is " + num(at100, 8));
  t.check(worst <= 1e-8, "|A'||(A^3)'|/|(A^2)'|^2 = sqrt(2m^2 + 16m + 229)/18 at t = pi/2");
  t.check(at100 > 8.0, "value > 8 at m = 100");
  t.check(at1e4 > 10.0, "value > 10 at m = 1e4");
  return t.result(5, "A5: norm-product ratio diverges like sqrt(2m^2 + 16m + 229)/18");
}

inline CriterionResult c06() {
  Tally t;
  double worst = 0.0;
  double at1000 = 0.0;
  for (double m : {10.0, 100.0, 1000.0}) {
    const double v = normalized_reverse_ratio(make_example("A4", {{"m", m}}).curve(), 0.0, 1.0, -1.0);
    const double l = std::log(m);
    worst = std::max(worst, rel_err(v, (m - 1.0) * (m - 1.0) / (m * l * l)));
    if (m == 1000.0) at1000 = v;
  }
  t.note("max rel err " + num(worst, 3) + ", value at m = 1000 is " + num(at1000, 8));
  t.check(worst <= 1e-8, "<D^1 A, D^-1 A>/|D^0 A|^2 = (m - 1)^2/(m ln^2 m)");
  t.check(at1000 >= 10.0, "value >= 10 at m = 1000");
  return t.result(6, "A4 with exponents 1, -1: normalized reverse ratio diverges");
}

inline std::string margin_range(const CheckerSummary& c) {
  return c.name + " [" + num(c.min_margin, 3) + ", " + num(c.max_margin, 3) + "]";
}

inline CriterionResult c07() {
  Tally t;
  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.t_samples = 1;
  cfg.dims = {1, 2, 3, 5};
  cfg.checkers = {"gengen", "jacobi"};
  cfg.rel_slack = 1e-8;
  cfg.include_counterexamples = false;
  cfg.threads = sweep_threads();
  const SweepSummary s = run_sweep(cfg);
  for (const auto& c : s.checkers) {
    t.note(margin_range(c));
    t.check(c.failures.empty() && c.evaluations == 1000, c.name + " relative discrepancy <= 1e-8");
  }
  return t.result(7, "identities <D^a A, A^b> = tr D^(a+b) A and Jacobi's formula on 1000 curves");
}

inline CriterionResult c08() {
  Tally t;
  SweepConfig cfg;
  cfg.threads = sweep_threads();
  const SweepSummary s = run_sweep(cfg);
  t.note("default sweep: " + std::to_string(s.failure_count()) + " failures");
  for (const char* name : {"ide0A", "cox", "odh", "reverse", "norm_bounds", "pde_chain", "logconvex"}) {
    const auto& c = s.at(name);
    t.check(c.failures.empty() && c.evaluations > 0, std::string(name) + " margin >= -1e-9 scale");
  }
  t.check(s.passed(), "no failures in any checker of the default sweep");
  bool ev_ok = !s.expected_violations.empty();
  for (const auto& v : s.expected_violations) ev_ok = ev_ok && v.observed;
  t.check(ev_ok, "expected-violation log non-empty and all observed");

  SweepConfig one = cfg;
  one.dims = {1};
  one.include_counterexamples = false;
  one.checkers = {"cox", "ide0A", "odh", "logconvex", "norm_bounds", "pde_chain", "pde_gradient",
                  "scalar_baseline"};
  const SweepSummary s1 = run_sweep(one);
  double worst = 0.0;
  for (const auto& c : s1.checkers) {
    worst = std::max({worst, std::abs(c.min_margin), std::abs(c.max_margin)});
    t.check(c.failures.empty() && std::abs(c.min_margin) <= 1e-12 && std::abs(c.max_margin) <= 1e-12,
            c.name + " equality within 1e-12 at d = 1");
  }
  t.note("d = 1 worst |normalized margin| " + num(worst, 3));
  return t.result(8, "inequality suite over the default sweep, equality at d = 1");
}

inline CriterionResult c09() {
  Tally t;
  SplitMix64 rng(9);
  double worst_qd = 0.0, worst_qf = 0.0, worst_df = 0.0;
  int instances = 0;
  while (instances < 200) {
    const std::size_t d = 1 + rng.index(5);
    const double cond = rng.uniform(1.0, 100.0);
    const SpdMatrix b = random_spd_matrix(rng, d, cond);
    Matrix h = random_matrix(rng, d);
    h = (h + h.transpose()) * 0.5;
    const double lambda = rng.uniform(-3.0, 3.0);
    if (std::abs(lambda) < 0.1) continue;
    const Matrix bm = b.matrix();
    const MatrixCurve line(d, -0.05, 0.05, [bm, h](double s) { return bm + h * s; },
                           [h](double) { return h; }, "line");
    const Matrix q = d_lambda(line, 0.0, lambda, DerivMethod::quadrature).matrix;
    const Matrix dd = d_lambda(line, 0.0, lambda, DerivMethod::divided_difference).matrix;
    const Matrix fd = d_lambda(line, 0.0, lambda, DerivMethod::finite_difference).matrix;
    worst_qd = std::max(worst_qd, rel_diff(q, dd));
    worst_qf = std::max(worst_qf, rel_diff(q, fd));
    worst_df = std::max(worst_df, rel_diff(dd, fd));
    ++instances;
  }
  t.note("quad/dd " + num(worst_qd, 3) + ", quad/fd " + num(worst_qf, 3) + ", dd/fd " + num(worst_df, 3));
  t.check(std::max({worst_qd, worst_qf, worst_df}) <= 1e-8, "pairwise agreement <= 1e-8");

  double worst_log = 0.0;
  const auto& rule = cached_gauss_legendre(64);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + rng.index(5);
    const SpdMatrix a = random_spd_matrix(rng, d, rng.uniform(1.0, 100.0));
    const Matrix spectral = mat_log(a).matrix();
    const double err = frob_norm(mat_log_integral(a, rule).matrix() - spectral) /
                       std::max(1.0, frob_norm(spectral));
    worst_log = std::max(worst_log, err);
  }
  t.note("log integral vs spectral " + num(worst_log, 3));
  t.check(worst_log <= 1e-10, "mat_log_integral vs spectral log <= 1e-10");
  return t.result(9, "three D^lambda methods agree; integral log matches spectral log");
}

inline CriterionResult c10() {
  Tally t;
  SplitMix64 rng(10);
  const auto& rule = cached_gauss_legendre(64);
  double worst_even = 0.0, worst_fd = 0.0, worst_neg = 0.0;
  for (int i = 0; i < 40; ++i) {
    const std::size_t d = 2 + rng.index(3);
    const SpdMatrix b = random_spd_matrix(rng, d, rng.uniform(1.0, 20.0));
    const Matrix x_dir = random_matrix(rng, d);
    const double x = rng.uniform(-2.0, 2.0);
    const double h = 2e-4;
    const FCurvature mid = f_of_x_and_curvature(b, x_dir, x, rule);
    const double fp = f_of_x_and_curvature(b, x_dir, x + h, rule).f;
    const double fm = f_of_x_and_curvature(b, x_dir, x - h, rule).f;
    const double fneg = f_of_x_and_curvature(b, x_dir, -x, rule).f;
    const double scale = std::max(std::abs(mid.f), std::abs(mid.f2));
    worst_even = std::max(worst_even, std::abs(mid.f - fneg) / std::max(std::abs(mid.f), kSlackFloor));
    worst_fd = std::max(worst_fd, std::abs((fp - 2.0 * mid.f + fm) / (h * h) - mid.f2) / scale);
    worst_neg = std::max(worst_neg, -mid.f2 / scale);
  }
  t.note("evenness " + num(worst_even, 3) + ", f'' vs FD " + num(worst_fd, 3) + ", min f''/scale " +
         num(-worst_neg, 3));
  t.check(worst_even <= 1e-10, "f(x) = f(-x) to 1e-10");
  t.check(worst_fd <= 1e-6, "f'' integral vs second difference <= 1e-6");
  t.check(worst_neg <= 1e-10, "f'' >= -1e-10 scale");
  return t.result(10, "f(x) = <P(x), P(-x)> is even with non-negative second derivative");
}

inline CriterionResult c11() {
  Tally t;
  const auto ex = make_example("Xcounter");
  const MatrixMap& x = ex.raw().value;
  const double inner = frob_inner(x(0.0), x(2.0));
  const double mid = frob_norm_sq(x(1.0));
  t.note("<X(0), X(2)> = " + num(inner, 17) + ", |X(1)|^2 = " + num(mid, 10));
  t.check(inner == 1.0, "<X(0), X(2)> = 1 exactly");
  t.check(std::abs(mid - 2.3811) <= 1e-4, "|X(1)|^2 = 2.3811 +- 1e-4");
  t.check(inner < mid, "strict separation");
  const double c1 = std::cosh(1.0);
  t.check(rel_err(mid, c1 * c1) <= 1e-14, "|X(1)|^2 = cosh^2 1");
  t.check(std::sqrt(frob_norm(x(0.0)) * frob_norm(x(2.0))) >= frob_norm(x(1.0)), "|X| log-convex at the midpoint");
  t.check(!check_midpoint_inner_product(x, 0.0, 2.0).passed(), "inner-product midpoint check reports the violation");
  return t.result(11, "log-convex |X| without the inner-product midpoint property");
}

inline CriterionResult c12() {
  Tally t;
  t.check(decomposition_count(1, 3, 2) == 2, "Q(1, 3, 2) = 2");
  double worst = 0.0;
  int reports = 0;
  SplitMix64 rng(12);
  for (int c = 0; c < 8; ++c) {
    const std::size_t d = std::vector<std::size_t>{1, 2, 3, 5}[c % 4];
    const MatrixCurve curve = random_spd_curve(rng.next(), d);
    const double tt = rng.uniform(-3.0, 3.0);
    for (int p = 1; p <= 3; ++p) {
      for (int q = 1; q <= 3; ++q) {
        const ReportSet s = power_expansion_identity(curve, tt, p, q, 1e-9);
        for (const auto& r : s.reports) {
          ++reports;
          t.check(r.passed(), r.name + " p=" + std::to_string(p) + " q=" + std::to_string(q));
          if (r.name != "power_expansion_q_termwise" && r.name != "power_expansion_reverse") {
            worst = std::max(worst, -r.normalized_margin());
          }
        }
      }
    }
  }
  t.note(std::to_string(reports) + " reports, worst identity discrepancy " + num(worst, 3));
  return t.result(12, "integer power expansion with Q weights, termwise Q comparison");
}

}  // namespace acceptance

inline const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all = {
      {1, "A1 closed form", acceptance::c01},
      {2, "A2 figure", acceptance::c02},
      {3, "A3 symmetry necessity", acceptance::c03},
      {4, "A4 reverse constant", acceptance::c04},
      {5, "A5 norm-product divergence", acceptance::c05},
      {6, "A4 normalized reverse divergence", acceptance::c06},
      {7, "identity property suite", acceptance::c07},
      {8, "inequality property suite", acceptance::c08},
      {9, "oracle equivalence", acceptance::c09},
      {10, "f machinery", acceptance::c10},
      {11, "separation witness", acceptance::c11},
      {12, "power expansion", acceptance::c12},
  };
  return all;
}

/// Runs one criterion, catching library errors into a failed result.
inline CriterionResult run_criterion(const Criterion& c) {
  try {
    return c.run();
  } catch (const std::exception& e) {
    return {c.id, c.title, false, std::string("error: ") + e.what()};
  }
}

/// All criteria, or only `only` when given.
inline std::vector<CriterionResult> run_acceptance(std::optional<int> only = std::nullopt) {
  std::vector<CriterionResult> out;
  for (const auto& c : acceptance_criteria()) {
    if (!only || *only == c.id) out.push_back(run_criterion(c));
  }
  return out;
}

inline std::string format_result(const CriterionResult& r) {
  char id[8];
  std::snprintf(id, sizeof id, "C%02d", r.id);
  return std::string(r.passed ? "PASS " : "FAIL ") + id + " " + r.title + " | " + r.detail;
}

}  // namespace spdcalc
