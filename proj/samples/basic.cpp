// Evaluates the normalized power derivative on a small curve and runs a few
// of the checkers on it.

#include <cmath>
#include <cstdio>

#include "spdcalc/spdcalc.hpp"

int main() {
  using namespace spdcalc;

  // A(t) = [[cosh t, 1], [1, 2]] with its analytic derivative.
  const MatrixCurve curve(
      2, -5.0, 5.0, [](double t) { return Matrix{{std::cosh(t), 1.0}, {1.0, 2.0}}; },
      [](double t) { return Matrix{{std::sinh(t), 0.0}, {0.0, 0.0}}; }, "cosh");

  const double t = 1.0;
  for (auto method : {DerivMethod::divided_difference, DerivMethod::quadrature,
                      DerivMethod::finite_difference}) {
    const Matrix d = d_lambda(curve, t, 0.5, method).matrix;
    std::printf("D^0.5 A(1) by %-18s = [[%.12f, %.12f], [%.12f, %.12f]]\n", to_string(method), d(0, 0),
                d(0, 1), d(1, 0), d(1, 1));
  }

  std::printf("r_A(1) = %.15f\n", ratio_r(curve, t));
  for (const auto& r : {check_gengen(curve, t, 1.0, -1.0), check_cox(curve, t, 1.0, 3.0),
                        check_reverse(curve, t, 1.0, 3.0), check_logconvex_midpoint(curve, t, -2.0, 2.0)}) {
    std::printf("%-20s lhs=%.10g rhs=%.10g margin=%.3g %s\n", r.name.c_str(), r.lhs, r.rhs, r.margin,
                to_string(r.status));
  }

  const SpdMatrix b = curve.value(t);
  const Matrix x{{0.0, 1.0}, {0.0, 0.0}};
  const auto odh = check_odh(b, x, 0.7);
  std::printf("%-20s lhs=%.10g rhs=%.10g %s\n", odh.name.c_str(), odh.lhs, odh.rhs, to_string(odh.status));
  return 0;
}
