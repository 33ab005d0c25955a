#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "spdcalc/errors.hpp"
#include "spdcalc/gallery.hpp"
#include "spdcalc/inequalities.hpp"
#include "spdcalc/norm_bounds.hpp"
#include "spdcalc/random.hpp"
#include "spdcalc/report.hpp"

namespace spdcalc {

struct Interval {
  double lo = -3.0;
  double hi = 3.0;
};

inline std::vector<std::string> all_checker_names() {
  return {"gengen",      "jacobi",    "cox",        "ide0A",        "odh",
          "reverse",     "logconvex", "norm_bounds", "pde_chain",   "pde_gradient",
          "power_expansion", "scalar_baseline"};
}

/// Finite-difference based identities carry O(h^2) truncation error, so the
/// Jacobi check uses a looser slack than the spectral checks.
inline constexpr double kFiniteDifferenceRelSlack = 1e-8;

struct SweepConfig {
  std::uint64_t seed = 1;
  int trials = 1000;
  std::vector<std::size_t> dims{2, 3, 5};
  /// Range for alpha, beta, gamma, delta and lambda.
  Interval exponents{-3.0, 3.0};
  /// Range for the curve parameter t and the odh argument x.
  Interval t_range{-3.0, 3.0};
  int t_samples = 4;
  std::vector<std::string> checkers = all_checker_names();
  int quad_order = kDefaultQuadratureOrder;
  DerivMethod method = DerivMethod::divided_difference;
  double rel_slack = kDefaultRelSlack;
  double curve_offset = kDefaultCurveOffset;
  int curve_degree = 2;
  int threads = 1;
  bool include_counterexamples = true;

  void validate() const {
    if (trials < 1) throw InvalidArgument("SweepConfig: trials must be at least 1");
    if (t_samples < 1) throw InvalidArgument("SweepConfig: t_samples must be at least 1");
    if (dims.empty()) throw InvalidArgument("SweepConfig: no dimensions");
    for (auto d : dims)
      if (d < 1 || d > 16) throw InvalidArgument("SweepConfig: dimensions must lie in [1, 16]");
    for (const Interval& r : {exponents, t_range}) {
      if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
        throw InvalidArgument("SweepConfig: ranges must be finite and ordered");
      }
    }
    if (quad_order < 1 || quad_order > kMaxQuadratureOrder) {
      throw InvalidArgument("SweepConfig: quad_order out of range");
    }
    if (!(rel_slack >= 0.0)) throw InvalidArgument("SweepConfig: negative slack");
    if (threads < 1) throw InvalidArgument("SweepConfig: threads must be at least 1");
    const auto names = all_checker_names();
    for (const auto& c : checkers) {
      if (std::find(names.begin(), names.end(), c) == names.end()) {
        throw InvalidArgument("SweepConfig: unknown checker '" + c + "'");
      }
    }
  }
};

/// A report that failed, with what is needed to reproduce it.
struct FailureRecord {
  std::string checker;
  int trial = 0;
  std::uint64_t curve_seed = 0;
  InequalityReport report;
};

struct CheckerSummary {
  std::string name;
  long evaluations = 0;
  long not_applicable = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_margin = -std::numeric_limits<double>::infinity();
  double mean_margin = 0.0;
  std::vector<FailureRecord> failures;
};

/// A known counterexample: `value` is expected to violate the stated bound.
struct ExpectedViolation {
  std::string name;
  std::map<std::string, double> params;
  double value = 0.0;
  double bound = 0.0;
  std::string relation;  // "<" or ">": the relation value has to the bound
  bool observed = false;
};

struct SweepSummary {
  SweepConfig config;
  std::vector<CheckerSummary> checkers;
  std::vector<ExpectedViolation> expected_violations;

  bool passed() const {
    return std::all_of(checkers.begin(), checkers.end(),
                       [](const CheckerSummary& c) { return c.failures.empty(); });
  }

  long failure_count() const {
    long n = 0;
    for (const auto& c : checkers) n += static_cast<long>(c.failures.size());
    return n;
  }

  const CheckerSummary& at(const std::string& name) const {
    for (const auto& c : checkers)
      if (c.name == name) return c;
    throw std::out_of_range("SweepSummary: no checker named " + name);
  }
};

namespace detail {

struct Evaluation {
  std::size_t checker;
  InequalityReport report;
};

struct TrialResult {
  std::uint64_t curve_seed = 0;
  std::vector<Evaluation> evaluations;
};

inline InequalityReport error_report(const std::string& name, const std::exception& e) {
  InequalityReport r;
  r.name = name;
  r.margin = -std::numeric_limits<double>::infinity();
  r.status = Status::fail;
  r.note = std::string("error: ") + e.what();
  return r;
}

inline TrialResult run_trial(const SweepConfig& cfg, int trial) {
  SplitMix64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
  TrialResult out;
  const std::size_t d = cfg.dims[static_cast<std::size_t>(trial) % cfg.dims.size()];
  out.curve_seed = rng.next();
  const MatrixCurve curve = RandomSpdCurve(out.curve_seed, d, cfg.curve_offset, cfg.curve_degree).curve();

  CheckOptions opt;
  opt.method = cfg.method;
  opt.quad_order = cfg.quad_order;
  opt.rel_slack = cfg.rel_slack;
  const auto& rule = cached_gauss_legendre(cfg.quad_order);
  const auto ex = [&] { return rng.uniform(cfg.exponents.lo, cfg.exponents.hi); };
  const auto baselines = scalar_baseline_ids();

  for (int sample = 0; sample < cfg.t_samples; ++sample) {
    const double t = rng.uniform(cfg.t_range.lo, cfg.t_range.hi);
    // Draw every random input up front so the stream does not depend on
    // which checkers are enabled.
    const double alpha = ex(), beta = ex(), gamma = ex(), delta = ex();
    const double p = rng.uniform(0.0, 2.0);
    const double q_draw = rng.uniform(0.0, 2.0);
    const double q = rng.uniform() < 0.25 ? 0.0 : q_draw;
    const double x = rng.uniform(cfg.t_range.lo, cfg.t_range.hi);
    const Matrix x_dir = random_matrix(rng, d);
    const int ip = 1 + static_cast<int>(rng.index(3)), iq = 1 + static_cast<int>(rng.index(3));
    const std::string& u_id = baselines[rng.index(baselines.size())];

    for (std::size_t ci = 0; ci < cfg.checkers.size(); ++ci) {
      const std::string& name = cfg.checkers[ci];
      const auto push = [&](InequalityReport r) {
        r.context["t"] = t;
        out.evaluations.push_back({ci, std::move(r)});
      };
      const auto push_set = [&](const ReportSet& s) {
        for (const auto& r : s.reports) push(r);
      };
      try {
        if (name == "gengen") {
          push(check_gengen(curve, t, alpha, beta, opt));
        } else if (name == "jacobi") {
          CheckOptions o = opt;
          o.rel_slack = std::max(opt.rel_slack, kFiniteDifferenceRelSlack);
          push(check_jacobi(curve, t, o));
        } else if (name == "cox") {
          push(check_cox(curve, t, alpha, beta, opt));
        } else if (name == "ide0A") {
          push(check_ide0A(curve, t, ExponentTuple{alpha, beta, gamma, delta, p + q > 0.0 ? p : 1.0, q}, opt));
        } else if (name == "odh") {
          push(check_odh(curve.value(t), x_dir, x, rule, cfg.rel_slack));
        } else if (name == "reverse") {
          push(check_reverse(curve, t, alpha, beta, opt));
        } else if (name == "logconvex") {
          push(check_logconvex_midpoint(curve, t, alpha, beta, opt));
        } else if (name == "norm_bounds") {
          push_set(norm_power_bounds(curve.value(t), alpha, kNormBoundRelSlack));
        } else if (name == "pde_chain") {
          push_set(check_pde_chain_steps(curve.value(t), cfg.rel_slack));
        } else if (name == "pde_gradient") {
          push(check_pde_gradient_bound(curve, t, opt));
        } else if (name == "power_expansion") {
          push_set(power_expansion_identity(curve, t, ip, iq, cfg.rel_slack));
        } else if (name == "scalar_baseline") {
          push_set(scalar_baseline(u_id, alpha, t));
        }
      } catch (const Error& e) {
        push(error_report(name, e));
      }
    }
  }
  return out;
}

inline std::vector<ExpectedViolation> expected_violations() {
  std::vector<ExpectedViolation> out;
  for (int k = 1; k <= 128; k *= 2) {
    const auto ex = make_example("A3", {{"k", static_cast<double>(k)}});
    const double r = ratio_r(ex.raw(), 0.0);
    out.push_back({"A3_ratio_below_three_quarters", {{"k", static_cast<double>(k)}, {"t", 0.0}}, r, 0.75,
                   "<", r < 0.75});
  }
  {
    const auto ex = make_example("A5", {{"m", 1e4}});
    const double v = norm_product_ratio(ex.curve(), std::numbers::pi / 2.0);
    out.push_back({"A5_norm_product_ratio_exceeds_C", {{"m", 1e4}, {"t", std::numbers::pi / 2.0}}, v,
                   10.0, ">", v > 10.0});
  }
  {
    const auto ex = make_example("A4", {{"m", 1000.0}});
    const double v = normalized_reverse_ratio(ex.curve(), 0.0, 1.0, -1.0);
    out.push_back({"A4_normalized_reverse_ratio_exceeds_C", {{"m", 1000.0}, {"t", 0.0}}, v, 10.0, ">",
                   v > 10.0});
  }
  {
    const auto ex = make_example("Xcounter");
    const MatrixMap& x = ex.raw().value;
    const double lhs = frob_inner(x(0.0), x(2.0));
    const double rhs = frob_norm_sq(x(1.0));
    out.push_back({"Xcounter_midpoint_inner_product", {{"alpha", 0.0}, {"beta", 2.0}}, lhs, rhs, "<",
                   lhs < rhs});
  }
  return out;
}

}  // namespace detail

/// Runs every configured checker over trials x t_samples random SPD curves.
/// Trials are independent and seeded by derive_seed(cfg.seed, trial); the
/// reduction runs in trial order, so results do not depend on cfg.threads.
inline SweepSummary run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepSummary summary;
  summary.config = cfg;
  if (cfg.checkers.empty()) return summary;

  std::vector<detail::TrialResult> results(static_cast<std::size_t>(cfg.trials));
  const int nthreads = std::min(cfg.threads, cfg.trials);
  if (nthreads <= 1) {
    for (int i = 0; i < cfg.trials; ++i) results[i] = detail::run_trial(cfg, i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < cfg.trials; i = next++) results[i] = detail::run_trial(cfg, i);
      });
    }
    for (auto& th : pool) th.join();
  }

  summary.checkers.resize(cfg.checkers.size());
  std::vector<long> counted(cfg.checkers.size(), 0);
  for (std::size_t i = 0; i < cfg.checkers.size(); ++i) summary.checkers[i].name = cfg.checkers[i];
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const auto& tr = results[static_cast<std::size_t>(trial)];
    for (const auto& ev : tr.evaluations) {
      CheckerSummary& s = summary.checkers[ev.checker];
      ++s.evaluations;
      if (ev.report.status == Status::not_applicable) {
        ++s.not_applicable;
        continue;
      }
      const double m = ev.report.normalized_margin();
      if (std::isfinite(m)) {
        s.min_margin = std::min(s.min_margin, m);
        s.max_margin = std::max(s.max_margin, m);
        s.mean_margin += m;
        ++counted[ev.checker];
      }
      if (ev.report.status == Status::fail) {
        FailureRecord f{s.name, trial, tr.curve_seed, ev.report};
        f.report.context["seed"] = static_cast<double>(cfg.seed);
        f.report.context["trial"] = trial;
        s.failures.push_back(std::move(f));
      }
    }
  }
  for (std::size_t i = 0; i < summary.checkers.size(); ++i) {
    auto& s = summary.checkers[i];
    if (counted[i] > 0) {
      s.mean_margin /= static_cast<double>(counted[i]);
    } else {
      s.min_margin = s.max_margin = 0.0;
    }
  }
  if (cfg.include_counterexamples) summary.expected_violations = detail::expected_violations();
  return summary;
}

/// %.17g
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string context_string(const std::map<std::string, double>& ctx) {
  std::string s;
  for (const auto& [k, v] : ctx) {
    if (!s.empty()) s += ';';
    s += k + "=" + format_real(v);
  }
  return s;
}

inline std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// One row per checker summary, failure and expected violation.
inline std::string sweep_to_csv(const SweepSummary& s) {
  using detail::csv_field;
  std::ostringstream os;
  os << "kind,name,report,evaluations,not_applicable,failures,min_margin,max_margin,mean_margin,"
        "lhs,rhs,margin,context,note\n";
  for (const auto& c : s.checkers) {
    os << "summary," << c.name << ",," << c.evaluations << ',' << c.not_applicable << ','
       << c.failures.size() << ',' << format_real(c.min_margin) << ',' << format_real(c.max_margin)
       << ',' << format_real(c.mean_margin) << ",,,,,\n";
  }
  for (const auto& c : s.checkers) {
    for (const auto& f : c.failures) {
      auto ctx = f.report.context;
      ctx["curve_seed"] = static_cast<double>(f.curve_seed);
      os << "failure," << c.name << ',' << csv_field(f.report.name) << ",,,,,,,"
         << format_real(f.report.lhs) << ',' << format_real(f.report.rhs) << ','
         << format_real(f.report.margin) << ',' << csv_field(detail::context_string(ctx)) << ','
         << csv_field(f.report.note) << '\n';
    }
  }
  for (const auto& v : s.expected_violations) {
    os << "expected_violation," << v.name << ",,,,,,,," << format_real(v.value) << ','
       << format_real(v.bound) << ",," << csv_field(detail::context_string(v.params)) << ','
       << (v.observed ? "observed" : "not observed") << '\n';
  }
  return os.str();
}

inline nlohmann::json report_to_json(const InequalityReport& r) {
  return {{"name", r.name},       {"lhs", r.lhs},         {"rhs", r.rhs},
          {"margin", r.margin},   {"slack", r.slack()},   {"status", to_string(r.status)},
          {"context", r.context}, {"note", r.note}};
}

inline nlohmann::json sweep_to_json(const SweepSummary& s) {
  nlohmann::json checkers = nlohmann::json::array();
  for (const auto& c : s.checkers) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : c.failures) {
      auto j = report_to_json(f.report);
      j["trial"] = f.trial;
      j["curve_seed"] = f.curve_seed;
      failures.push_back(std::move(j));
    }
    checkers.push_back({{"name", c.name},
                        {"trials", c.evaluations},
                        {"not_applicable", c.not_applicable},
                        {"min_margin", c.min_margin},
                        {"max_margin", c.max_margin},
                        {"mean_margin", c.mean_margin},
                        {"failures", std::move(failures)}});
  }
  nlohmann::json expected = nlohmann::json::array();
  for (const auto& v : s.expected_violations) {
    expected.push_back({{"name", v.name},
                        {"params", v.params},
                        {"value", v.value},
                        {"bound", v.bound},
                        {"relation", v.relation},
                        {"observed", v.observed}});
  }
  const auto& cfg = s.config;
  nlohmann::json config = {{"seed", cfg.seed},
                           {"trials", cfg.trials},
                           {"dims", cfg.dims},
                           {"exponents", {cfg.exponents.lo, cfg.exponents.hi}},
                           {"t_range", {cfg.t_range.lo, cfg.t_range.hi}},
                           {"t_samples", cfg.t_samples},
                           {"checkers", cfg.checkers},
                           {"quad_order", cfg.quad_order},
                           {"method", to_string(cfg.method)},
                           {"rel_slack", cfg.rel_slack}};
  return {{"config", std::move(config)},
          {"checkers", std::move(checkers)},
          {"expected_violations", std::move(expected)},
          {"passed", s.passed()}};
}

/// Writes the summary once, as CSV or JSON.
inline void write_sweep(const SweepSummary& s, const std::string& path, const std::string& format) {
  std::string text;
  if (format == "csv") {
    text = sweep_to_csv(s);
  } else if (format == "json") {
    text = sweep_to_json(s).dump(2) + "\n";
  } else {
    throw InvalidArgument("write_sweep: format must be csv or json");
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path);
}

}  // namespace spdcalc
