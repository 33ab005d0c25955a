#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spdcalc {

inline constexpr double kDefaultRelSlack = 1e-9;
inline constexpr double kSlackFloor = 1e-300;

enum class Status { pass, fail, not_applicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "not_applicable";
  }
  return "?";
}

/// Outcome of one checker evaluation. Every checker orients `margin` so that
/// the stated inequality holds exactly when margin >= 0; identities report
/// margin = -|lhs - rhs|.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  /// Extra magnitude entering the slack, e.g. a Cauchy-Schwarz bound for an
  /// identity whose two sides may both be close to zero.
  double scale = 0.0;
  double rel_slack = kDefaultRelSlack;
  Status status = Status::fail;
  std::map<std::string, double> context;
  std::string note;

  bool passed() const noexcept { return status == Status::pass; }

  double slack_scale() const noexcept {
    return std::max({std::abs(lhs), std::abs(rhs), scale, kSlackFloor});
  }
  double slack() const noexcept { return rel_slack * slack_scale(); }
  /// margin measured in units of slack_scale().
  double normalized_margin() const noexcept { return margin / slack_scale(); }
};

/// Sets status from margin: pass iff margin >= -rel_slack * slack_scale().
inline InequalityReport& finalize(InequalityReport& r) {
  if (r.status == Status::not_applicable) return r;
  r.status = (std::isfinite(r.margin) && r.margin >= -r.slack()) ? Status::pass : Status::fail;
  return r;
}

inline InequalityReport make_inequality(std::string name, double lhs, double rhs, double margin,
                                        double rel_slack, double scale = 0.0) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.rel_slack = rel_slack;
  r.scale = scale;
  return finalize(r);
}

inline InequalityReport make_identity(std::string name, double lhs, double rhs, double rel_slack,
                                      double scale = 0.0) {
  return make_inequality(std::move(name), lhs, rhs, -std::abs(lhs - rhs), rel_slack, scale);
}

/// Several related reports produced by one evaluation.
struct ReportSet {
  std::vector<InequalityReport> reports;

  bool passed() const {
    return std::none_of(reports.begin(), reports.end(),
                        [](const InequalityReport& r) { return r.status == Status::fail; });
  }

  const InequalityReport& at(const std::string& name) const {
    for (const auto& r : reports)
      if (r.name == name) return r;
    throw std::out_of_range("ReportSet: no report named " + name);
  }
};

using BoundCheck = ReportSet;

}  // namespace spdcalc
