#pragma once

#include <algorithm>
#include <cmath>

#include "spdcalc/matrix.hpp"
#include "spdcalc/matrix_functions.hpp"
#include "spdcalc/report.hpp"
#include "spdcalc/symmetric.hpp"

namespace spdcalc {

inline constexpr double kNormBoundRelSlack = 1e-12;

/// Norm/power comparisons for an SPD matrix of size d:
///   |A| <= <A,I> <= sqrt(d)|A|
///   min{1, d^((1-a)/2)} |A|^a <= |A^a| <= max{1, d^((1-a)/2)} |A|^a   (a >= 0)
///   min{d^(1/2), d^(-a/2)} |A|^a <= |A^a|                           (a <= 0)
/// Both families apply at a = 0.
inline BoundCheck norm_power_bounds(const SpdMatrix& a, double alpha,
                                    double rel_slack = kNormBoundRelSlack) {
  const double d = static_cast<double>(a.dim());
  const double norm = frob_norm(a.matrix());
  const double tr = trace(a.matrix());
  const double pow_norm = frob_norm(mat_pow(a, alpha).matrix());
  const double norm_pow = std::pow(norm, alpha);

  BoundCheck out;
  auto add = [&](const char* name, double smaller, double larger) {
    InequalityReport r = make_inequality(name, smaller, larger, larger - smaller, rel_slack);
    r.context = {{"alpha", alpha}, {"d", d}};
    out.reports.push_back(std::move(r));
  };
  add("trace_lower", norm, tr);
  add("trace_upper", tr, std::sqrt(d) * norm);
  if (alpha >= 0.0) {
    const double c = std::pow(d, 0.5 * (1.0 - alpha));
    add("power_lower_nonneg", std::min(1.0, c) * norm_pow, pow_norm);
    add("power_upper_nonneg", pow_norm, std::max(1.0, c) * norm_pow);
  }
  if (alpha <= 0.0) {
    add("power_lower_nonpos", std::min(std::sqrt(d), std::pow(d, -0.5 * alpha)) * norm_pow,
        pow_norm);
  }
  return out;
}

}  // namespace spdcalc
