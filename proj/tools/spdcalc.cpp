// spdcalc: command-line front end for sweeps, named examples, the r_A2
// figure and the acceptance suite.
//
// Exit codes: 0 success, 1 verification failure or runtime error, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spdcalc/spdcalc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("invalid number for " + what + ": '" + s + "'");
  return v;
}

spdcalc::Grid parse_grid(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw UsageError("--grid expects lo,hi,n");
  spdcalc::Grid g;
  g.lo = parse_real(parts[0], "grid lo");
  g.hi = parse_real(parts[1], "grid hi");
  const double n = parse_real(parts[2], "grid n");
  if (n != static_cast<int>(n)) throw UsageError("grid n must be an integer");
  g.n = static_cast<int>(n);
  try {
    g.validate();
  } catch (const spdcalc::InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return g;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    for (const auto& kv : split(item, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--params expects key=value, got '" + kv + "'");
      out[kv.substr(0, eq)] = parse_real(kv.substr(eq + 1), kv.substr(0, eq));
    }
  }
  return out;
}

spdcalc::DerivMethod parse_method(const std::string& s) {
  if (s == "divided_difference") return spdcalc::DerivMethod::divided_difference;
  if (s == "quadrature") return spdcalc::DerivMethod::quadrature;
  if (s == "finite_difference") return spdcalc::DerivMethod::finite_difference;
  throw UsageError("unknown method '" + s + "'");
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    spdcalc::write_text(out, text);
  }
}

struct VerifyArgs {
  std::uint64_t seed = 1;
  int trials = 1000;
  std::string dims = "2,3,5";
  int quad_order = spdcalc::kDefaultQuadratureOrder;
  std::string checkers;
  std::string out;
  std::string format = "csv";
  int t_samples = 4;
  int threads = 1;
  std::string method = "divided_difference";
};

int run_verify(const VerifyArgs& a) {
  spdcalc::SweepConfig cfg;
  cfg.seed = a.seed;
  cfg.trials = a.trials;
  cfg.dims.clear();
  for (const auto& d : split(a.dims, ',')) {
    const double v = parse_real(d, "dims");
    if (v != static_cast<double>(static_cast<std::size_t>(v))) throw UsageError("dims must be integers");
    cfg.dims.push_back(static_cast<std::size_t>(v));
  }
  cfg.quad_order = a.quad_order;
  if (!a.checkers.empty()) cfg.checkers = a.checkers == "none" ? std::vector<std::string>{} : split(a.checkers, ',');
  cfg.t_samples = a.t_samples;
  cfg.threads = a.threads;
  cfg.method = parse_method(a.method);
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");
  try {
    cfg.validate();
  } catch (const spdcalc::InvalidArgument& e) {
    throw UsageError(e.what());
  }

  const auto summary = spdcalc::run_sweep(cfg);
  if (a.out.empty()) {
    std::cout << (a.format == "csv" ? spdcalc::sweep_to_csv(summary) : spdcalc::sweep_to_json(summary).dump(2) + "\n");
  } else {
    spdcalc::write_sweep(summary, a.out, a.format);
    for (const auto& c : summary.checkers) {
      std::printf("%-16s evaluations=%ld failures=%zu min_margin=%.3g\n", c.name.c_str(), c.evaluations,
                  c.failures.size(), c.min_margin);
    }
  }
  if (!summary.passed()) {
    std::fprintf(stderr, "verify: %ld failures\n", summary.failure_count());
    return kExitFail;
  }
  return kExitOk;
}

int run_example(const std::string& id, const std::vector<std::string>& param_items,
                const std::string& grid_text, const std::string& out) {
  spdcalc::NamedExample ex;
  try {
    ex = spdcalc::make_example(id, parse_params(param_items));
  } catch (const spdcalc::InvalidArgument& e) {
    throw UsageError(e.what());
  }

  std::ostringstream os;
  if (!ex.is_curve()) {
    const spdcalc::SpdMatrix a(ex.matrix());
    os << "quantity,value,closed_form\n";
    for (const auto& cf : ex.closed_forms) {
      os << cf.quantity << ',' << spdcalc::format_real(spdcalc::example_quantity(ex, cf, 0.0)) << ','
         << spdcalc::format_real(cf.value(0.0)) << '\n';
    }
    for (const auto& r : spdcalc::norm_power_bounds(a, -1.0).reports) {
      os << r.name << ',' << spdcalc::format_real(r.margin) << ",\n";
    }
    emit(os.str(), out);
    return kExitOk;
  }

  const auto& raw = ex.raw();
  spdcalc::Grid grid{std::max(-3.0, raw.t_lo), std::min(3.0, raw.t_hi), 241};
  if (!grid_text.empty()) grid = parse_grid(grid_text);
  if (!raw.contains(grid.lo) || !raw.contains(grid.hi)) throw UsageError("grid leaves the example's domain");

  std::vector<const spdcalc::ClosedForm*> along, pinned;
  for (const auto& cf : ex.closed_forms) (cf.at ? pinned : along).push_back(&cf);
  if (along.empty() && ex.id == "A2") {
    os << "x,ratio_r\n";
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.at(i);
      os << spdcalc::format_real(x) << ',' << spdcalc::format_real(spdcalc::ratio_r(ex.curve(), x)) << '\n';
    }
  } else {
    os << "x";
    for (const auto* cf : along) os << ',' << cf->quantity << ',' << cf->quantity << "_closed_form";
    os << '\n';
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.at(i);
      os << spdcalc::format_real(x);
      for (const auto* cf : along) {
        os << ',' << spdcalc::format_real(spdcalc::example_quantity(ex, *cf, x)) << ','
           << spdcalc::format_real(cf->value(x));
      }
      os << '\n';
    }
  }
  for (const auto* cf : pinned) {
    os << "# " << cf->quantity << " at t=" << spdcalc::format_real(*cf->at) << ": "
       << spdcalc::format_real(spdcalc::example_quantity(ex, *cf, *cf->at))
       << " closed_form=" << spdcalc::format_real(cf->value(*cf->at)) << '\n';
  }
  emit(os.str(), out);
  return kExitOk;
}

int run_figure1(const std::string& out, const std::string& grid_text) {
  const spdcalc::Grid grid = grid_text.empty() ? spdcalc::Grid{} : parse_grid(grid_text);
  const auto s = spdcalc::figure1(out, grid);
  std::printf("wrote %s (%zu rows); min r_A2 = %.17g at x = %.6g\n", out.c_str(), s.x.size(), s.min(),
              s.x[s.argmin()]);
  return kExitOk;
}

int run_selftest(std::optional<int> only) {
  bool ok = true;
  for (const auto& r : spdcalc::run_acceptance(only)) {
    std::cout << spdcalc::format_result(r) << '\n';
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix power derivative identities and inequalities on SPD curves"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the randomized checker sweep");
  verify->add_option("--seed", va.seed, "64-bit base seed");
  verify->add_option("--trials", va.trials, "number of random curves");
  verify->add_option("--dims", va.dims, "comma-separated dimensions");
  verify->add_option("--quad-order", va.quad_order, "Gauss-Legendre order");
  verify->add_option("--checkers", va.checkers, "comma-separated checker names (default: all)");
  verify->add_option("--out", va.out, "output path (default: stdout)");
  verify->add_option("--format", va.format, "csv or json");
  verify->add_option("--t-samples", va.t_samples, "parameter samples per curve");
  verify->add_option("--threads", va.threads, "worker threads");
  verify->add_option("--method", va.method, "divided_difference, quadrature or finite_difference");

  std::string ex_id;
  std::vector<std::string> ex_params;
  std::string ex_grid, ex_out;
  auto* example = app.add_subcommand("example", "evaluate a named example against its closed form");
  example->add_option("--example", ex_id, "A0, A1, A2, A3, A4, A5 or Xcounter")->required();
  example->add_option("--params", ex_params, "parameters as key=value, e.g. k=3 m=10");
  example->add_option("--grid", ex_grid, "lo,hi,n");
  example->add_option("--out", ex_out, "output path (default: stdout)");

  std::string fig_out = "figure1.csv", fig_grid;
  auto* figure = app.add_subcommand("figure1", "write r_A2 as CSV and SVG");
  figure->add_option("--out", fig_out, "CSV path; the SVG goes next to it");
  figure->add_option("--grid", fig_grid, "lo,hi,n (default -3,3,601)");

  std::optional<int> criterion;
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--criterion", criterion, "run a single criterion by number");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) return run_verify(va);
    if (*example) return run_example(ex_id, ex_params, ex_grid, ex_out);
    if (*figure) return run_figure1(fig_out, fig_grid);
    if (*selftest) return run_selftest(criterion);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
