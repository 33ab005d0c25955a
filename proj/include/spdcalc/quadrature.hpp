#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "spdcalc/errors.hpp"
#include "spdcalc/matrix.hpp"

namespace spdcalc {

inline constexpr int kMaxQuadratureOrder = 256;
inline constexpr int kDefaultQuadratureOrder = 64;
inline constexpr double kAdaptiveQuadratureTolerance = 1e-11;

/// Gauss-Legendre rule affinely mapped to [0, 1]. Nodes ascend, weights sum to 1.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
      : nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.size() != weights_.size() || nodes_.empty()) {
      throw InvalidArgument("QuadratureRule: nodes and weights must be non-empty and equal length");
    }
  }

  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Nodes are the roots of P_order found by Newton iteration in extended
/// precision, then mapped from [-1, 1] to [0, 1].
inline QuadratureRule gauss_legendre(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw InvalidArgument("gauss_legendre: order must lie in [1, " +
                          std::to_string(kMaxQuadratureOrder) + "], got " + std::to_string(order));
  }
  using Real = long double;
  const int n = order;
  std::vector<double> nodes(n);
  std::vector<double> weights(n);
  const Real pi = std::numbers::pi_v<long double>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi * (static_cast<Real>(i) + 0.75L) / (static_cast<Real>(n) + 0.5L));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1;
      Real p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      // p1 = P_n(x), p0 = P_{n-1}(x)
      dp = n == 1 ? Real(1) : n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    {
      // Re-evaluate the derivative at the converged root for the weight.
      Real p0 = 1;
      Real p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n == 1 ? Real(1) : n * (x * p1 - p0) / (x * x - 1);
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    // x is the i-th largest root; store mirrored pairs so nodes ascend.
    nodes[n - 1 - i] = static_cast<double>((1 + x) / 2);
    nodes[i] = static_cast<double>((1 - x) / 2);
    weights[n - 1 - i] = static_cast<double>(w / 2);
    weights[i] = static_cast<double>(w / 2);
  }
  if (n % 2 == 1) nodes[n / 2] = 0.5;
  return QuadratureRule(std::move(nodes), std::move(weights));
}

/// Shared, immutable rule of the given order; computed once per process.
inline const QuadratureRule& cached_gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const QuadratureRule>(gauss_legendre(order));
  return *slot;
}

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Matrix& m) { return frob_norm(m); }
}  // namespace detail

/// sum_k w_k f(s_k) for a scalar- or matrix-valued integrand on [0, 1].
template <class F>
auto integrate(const QuadratureRule& rule, F&& f) {
  const auto& s = rule.nodes();
  const auto& w = rule.weights();
  auto acc = f(s[0]) * w[0];
  for (std::size_t k = 1; k < s.size(); ++k) acc += f(s[k]) * w[k];
  return acc;
}

/// Double integral over [0,1]^2 with the tensor-product rule.
template <class F>
auto integrate_square(const QuadratureRule& rule, F&& f) {
  return integrate(rule, [&](double s) { return integrate(rule, [&](double t) { return f(s, t); }); });
}

template <class T>
struct AdaptiveResult {
  T value;
  int order;
  bool converged;
};

/// Doubles the rule order, starting at start_order, until two successive
/// results differ by less than rel_tol relative. Stops at kMaxQuadratureOrder.
template <class F>
auto integrate_adaptive(F&& f, int start_order = kDefaultQuadratureOrder,
                        double rel_tol = kAdaptiveQuadratureTolerance) {
  auto prev = integrate(cached_gauss_legendre(start_order), f);
  using T = decltype(prev);
  int order = start_order;
  while (order < kMaxQuadratureOrder) {
    const int next_order = std::min(2 * order, kMaxQuadratureOrder);
    auto next = integrate(cached_gauss_legendre(next_order), f);
    const double diff = detail::magnitude(next - prev);
    const double scale = detail::magnitude(next);
    order = next_order;
    if (diff <= rel_tol * scale) return AdaptiveResult<T>{std::move(next), order, true};
    prev = std::move(next);
  }
  return AdaptiveResult<T>{std::move(prev), order, false};
}

}  // namespace spdcalc
