#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spdcalc/curve.hpp"
#include "spdcalc/errors.hpp"
#include "spdcalc/inequalities.hpp"
#include "spdcalc/matrix.hpp"
#include "spdcalc/report.hpp"

namespace spdcalc {

/// Closed-form value of a derived quantity. `at` pins the single parameter
/// value where the formula is stated; otherwise it holds on the whole domain.
struct ClosedForm {
  std::string quantity;
  std::function<double(double)> value;
  std::optional<double> at;
};

struct NamedExample {
  std::string id;
  std::map<std::string, double> params;
  std::variant<Matrix, MatrixCurve, RawCurve> payload;
  std::vector<ClosedForm> closed_forms;
  bool symmetric = true;

  const MatrixCurve& curve() const {
    if (auto* c = std::get_if<MatrixCurve>(&payload)) return *c;
    throw InvalidArgument("example " + id + " is not an SPD curve");
  }

  /// Raw view of either curve payload.
  const RawCurve& raw() const {
    if (auto* c = std::get_if<MatrixCurve>(&payload)) return c->raw();
    if (auto* r = std::get_if<RawCurve>(&payload)) return *r;
    throw InvalidArgument("example " + id + " is a single matrix");
  }

  const Matrix& matrix() const {
    if (auto* m = std::get_if<Matrix>(&payload)) return *m;
    throw InvalidArgument("example " + id + " is a curve");
  }

  bool is_curve() const noexcept { return !std::holds_alternative<Matrix>(payload); }

  /// First closed form, if any.
  const ClosedForm* closed_form() const noexcept {
    return closed_forms.empty() ? nullptr : &closed_forms.front();
  }

  const ClosedForm* closed_form(const std::string& quantity) const noexcept {
    for (const auto& cf : closed_forms)
      if (cf.quantity == quantity) return &cf;
    return nullptr;
  }
};

namespace detail {

inline Matrix mat2(double a, double b, double c, double d) { return Matrix{{a, b}, {c, d}}; }

inline double param(const std::map<std::string, double>& params, const std::string& key,
                    double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

inline void allow_params(const std::string& id, const std::map<std::string, double>& params,
                         const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) throw InvalidArgument("example " + id + ": unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw InvalidArgument("example " + id + ": non-finite parameter");
  }
}

inline double natural_param(const std::string& id, const std::map<std::string, double>& params,
                            double fallback) {
  const double k = param(params, "k", fallback);
  if (!(k >= 1.0) || k != std::floor(k)) {
    throw InvalidArgument("example " + id + ": k must be a positive integer");
  }
  return k;
}

inline MatrixMap constant_map(Matrix m) {
  return [m = std::move(m)](double) { return m; };
}

}  // namespace detail

inline std::vector<std::string> example_ids() {
  return {"A0", "A1", "A2", "A3", "A4", "A5", "Xcounter"};
}

/// Builds one of the named examples. Parameters: A0, A3 take k (positive
/// integer); A4 takes m > 2; A5 takes m > 1.
inline NamedExample make_example(const std::string& id, const std::map<std::string, double>& params = {}) {
  using detail::mat2;
  NamedExample ex{id, {}, Matrix{}, {}, true};
  const double inf = std::numeric_limits<double>::infinity();

  if (id == "A0") {
    detail::allow_params(id, params, {"k"});
    const double k = detail::natural_param(id, params, 10.0);
    ex.params = {{"k", k}};
    ex.payload = Matrix::diagonal(std::vector<double>{k, 1.0 / k});
    // |A0^{-1}| / |A0| for alpha = -1
    ex.closed_forms.push_back({"inverse_norm_ratio", [](double) { return 1.0; }, std::nullopt});
    return ex;
  }
  if (id == "A1") {
    detail::allow_params(id, params, {});
    ex.payload = MatrixCurve(
        2, -inf, inf, [](double x) { return mat2(std::cosh(x), 1.0, 1.0, 2.0); },
        [](double x) { return mat2(std::sinh(x), 0.0, 0.0, 0.0); }, "A1",
        detail::constant_map(mat2(1.0, 0.0, 0.0, 0.0)));
    ex.closed_forms.push_back({"ratio_r",
                               [](double x) {
                                 const double c = std::cosh(x);
                                 return 0.75 + 1.0 / (4.0 + 8.0 * c * c);
                               },
                               std::nullopt});
    return ex;
  }
  if (id == "A2") {
    detail::allow_params(id, params, {});
    ex.payload = MatrixCurve(
        2, -inf, inf,
        [](double x) {
          const double s = 0.2 * std::sin(5.0 * x);
          return mat2(std::cosh(x), s, s, 1.0);
        },
        [](double x) {
          const double c = std::cos(5.0 * x);
          return mat2(std::sinh(x), c, c, 0.0);
        },
        "A2");
    return ex;
  }
  if (id == "A3") {
    detail::allow_params(id, params, {"k"});
    const double k = detail::natural_param(id, params, 3.0);
    ex.params = {{"k", k}};
    ex.symmetric = false;
    RawCurve raw;
    raw.dim = 2;
    raw.value = [k](double x) { return mat2(std::cosh(x), k, 0.0, k * k); };
    raw.derivative = [](double x) { return mat2(std::sinh(x), 0.0, 0.0, 0.0); };
    raw.tangent = detail::constant_map(mat2(1.0, 0.0, 0.0, 0.0));
    raw.label = "A3";
    ex.payload = std::move(raw);
    ex.closed_forms.push_back({"ratio_r",
                               [k](double x) {
                                 const double c = std::cosh(x);
                                 return 3.0 / (4.0 + k * k / (c * c));
                               },
                               std::nullopt});
    return ex;
  }
  if (id == "A4") {
    detail::allow_params(id, params, {"m"});
    const double m = detail::param(params, "m", 3.0);
    if (!(m > 2.0)) throw InvalidArgument("example A4: m must exceed 2");
    ex.params = {{"m", m}};
    ex.payload = MatrixCurve(
        2, -1.0, 1.0, [m](double x) { return mat2(1.0, std::sin(x), std::sin(x), m); },
        [](double x) { return mat2(0.0, std::cos(x), std::cos(x), 0.0); }, "A4");
    ex.closed_forms.push_back({"ratio_r",
                               [m](double x) {
                                 const double s2 = std::sin(x) * std::sin(x);
                                 return (m * m + m + 1.0 + 3.0 * s2) / (m * m + 2.0 * m + 1.0 + 4.0 * s2);
                               },
                               std::nullopt});
    ex.closed_forms.push_back({"normalized_reverse_ratio",
                               [m](double) {
                                 const double l = std::log(m);
                                 return (m - 1.0) * (m - 1.0) / (m * l * l);
                               },
                               0.0});
    return ex;
  }
  if (id == "A5") {
    detail::allow_params(id, params, {"m"});
    const double m = detail::param(params, "m", 100.0);
    if (!(m > 1.0)) throw InvalidArgument("example A5: m must exceed 1");
    ex.params = {{"m", m}};
    ex.payload = MatrixCurve(
        2, -inf, inf,
        [m](double x) { return mat2(2.0 + std::cos(x), std::sin(x), std::sin(x), m); },
        [](double x) { return mat2(-std::sin(x), std::cos(x), std::cos(x), 0.0); }, "A5");
    ex.closed_forms.push_back(
        {"norm_product_ratio",
         [m](double) { return std::sqrt(2.0 * m * m + 16.0 * m + 229.0) / 18.0; },
         std::numbers::pi / 2.0});
    return ex;
  }
  if (id == "Xcounter") {
    detail::allow_params(id, params, {});
    ex.symmetric = false;
    RawCurve raw;
    raw.dim = 2;
    raw.value = [](double l) { return mat2(std::sinh(l), 1.0, 0.0, 0.0); };
    raw.derivative = [](double l) { return mat2(std::cosh(l), 0.0, 0.0, 0.0); };
    raw.label = "Xcounter";
    ex.payload = std::move(raw);
    ex.closed_forms.push_back({"norm", [](double l) { return std::cosh(l); }, std::nullopt});
    return ex;
  }
  throw InvalidArgument("unknown example id '" + id + "'");
}

/// Numerical value of a closed form's quantity for the example at t.
inline double example_quantity(const NamedExample& ex, const ClosedForm& cf, double t,
                               const CheckOptions& opt = {}) {
  if (cf.quantity == "ratio_r") {
    if (ex.symmetric) return ratio_r(ex.curve(), t);
    return ratio_r(ex.raw(), t);
  }
  if (cf.quantity == "norm_product_ratio") return norm_product_ratio(ex.curve(), t);
  if (cf.quantity == "normalized_reverse_ratio") return normalized_reverse_ratio(ex.curve(), t, 1.0, -1.0, opt);
  if (cf.quantity == "norm") return frob_norm(ex.raw().value(t));
  if (cf.quantity == "inverse_norm_ratio") {
    const SpdMatrix a(ex.matrix());
    return frob_norm(mat_pow(a, -1.0).matrix()) / frob_norm(a.matrix());
  }
  throw InvalidArgument("example_quantity: unknown quantity '" + cf.quantity + "'");
}

inline std::vector<std::string> scalar_baseline_ids() { return {"exp", "2+sin", "1/(1+t^2)+1"}; }

/// Scalar identities u' u^a = (u^(a+1))' / (a+1) and
/// u' (u^a)' = 4a/(a+1)^2 |(u^((a+1)/2))'|^2. Both are rewritten with the
/// normalized derivative D^l u = u^(l-1) u' so that a = -1 is covered.
inline ReportSet scalar_baseline(const std::string& u_id, double alpha, double t,
                                 double rel_slack = 1e-12) {
  double u = 0.0;
  double du = 0.0;
  if (u_id == "exp") {
    u = std::exp(t);
    du = u;
  } else if (u_id == "2+sin") {
    u = 2.0 + std::sin(t);
    du = std::cos(t);
  } else if (u_id == "1/(1+t^2)+1") {
    const double w = 1.0 + t * t;
    u = 1.0 / w + 1.0;
    du = -2.0 * t / (w * w);
  } else {
    throw InvalidArgument("scalar_baseline: unknown function '" + u_id + "'");
  }
  const auto normalized = [&](double l) { return std::pow(u, l - 1.0) * du; };
  const auto plain = [&](double l) { return l * std::pow(u, l - 1.0) * du; };

  ReportSet out;
  {
    const double lhs = du * std::pow(u, alpha);
    const double rhs = alpha == -1.0 ? normalized(0.0) : plain(alpha + 1.0) / (alpha + 1.0);
    out.reports.push_back(make_identity("scalar_first", lhs, rhs, rel_slack));
  }
  {
    const double lhs = du * plain(alpha);
    const double half = 0.5 * (alpha + 1.0);
    const double rhs = half == 0.0 ? alpha * normalized(0.0) * normalized(0.0)
                                   : 4.0 * alpha / ((alpha + 1.0) * (alpha + 1.0)) * plain(half) * plain(half);
    out.reports.push_back(make_identity("scalar_second", lhs, rhs, rel_slack));
  }
  for (auto& r : out.reports) {
    r.context = {{"alpha", alpha}, {"t", t}};
    r.note = u_id;
  }
  return out;
}

}  // namespace spdcalc
