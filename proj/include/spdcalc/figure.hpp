#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spdcalc/errors.hpp"
#include "spdcalc/gallery.hpp"
#include "spdcalc/inequalities.hpp"
#include "spdcalc/sweep.hpp"

namespace spdcalc {

struct Grid {
  double lo = -3.0;
  double hi = 3.0;
  int n = 601;

  void validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw InvalidArgument("grid: need finite lo < hi");
    }
    if (n < 2) throw InvalidArgument("grid: need at least 2 points");
  }

  double at(int i) const { return i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1); }
};

struct Series {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t argmin() const {
    return static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  }
  double min() const { return y[argmin()]; }
};

/// r_{A2} sampled on the grid.
inline Series figure1_series(const Grid& grid) {
  grid.validate();
  const auto ex = make_example("A2");
  Series s;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.at(i);
    s.x.push_back(x);
    s.y.push_back(ratio_r(ex.curve(), x));
  }
  return s;
}

inline std::string series_to_csv(const Series& s, const std::string& ylabel) {
  std::ostringstream os;
  os << "x," << ylabel << "\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) os << format_real(s.x[i]) << ',' << format_real(s.y[i]) << '\n';
  return os.str();
}

namespace detail {

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

}  // namespace detail

/// Line plot on a fixed 800x500 viewBox with 5 labeled ticks per axis and a
/// dashed reference line at y = reference.
inline std::string series_to_svg(const Series& s, const std::string& title, double reference) {
  using detail::fixed2;
  constexpr double W = 800, H = 500, L = 80, R = 30, T = 50, B = 60;
  const double x0 = s.x.front(), x1 = s.x.back();
  double y0 = std::min(reference, *std::min_element(s.y.begin(), s.y.end()));
  double y1 = std::max(reference, *std::max_element(s.y.begin(), s.y.end()));
  const double pad = 0.05 * (y1 - y0 > 0 ? y1 - y0 : 1.0);
  y0 -= pad;
  y1 += pad;
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
     << title << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << fixed2(L) << "\" y1=\"" << fixed2(H - B) << "\" x2=\"" << fixed2(W - R)
     << "\" y2=\"" << fixed2(H - B) << "\"/>\n";
  os << "<line x1=\"" << fixed2(L) << "\" y1=\"" << fixed2(T) << "\" x2=\"" << fixed2(L) << "\" y2=\""
     << fixed2(H - B) << "\"/>\n";
  for (int i = 0; i < 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    os << "<line x1=\"" << fixed2(px(xv)) << "\" y1=\"" << fixed2(H - B) << "\" x2=\"" << fixed2(px(xv))
       << "\" y2=\"" << fixed2(H - B + 6) << "\"/>\n";
    os << "<line x1=\"" << fixed2(L - 6) << "\" y1=\"" << fixed2(py(yv)) << "\" x2=\"" << fixed2(L)
       << "\" y2=\"" << fixed2(py(yv)) << "\"/>\n";
  }
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"13\">\n";
  for (int i = 0; i < 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << fixed2(px(xv)) << "\" y=\"" << fixed2(H - B + 22)
       << "\" text-anchor=\"middle\">" << detail::tick_label(xv) << "</text>\n";
    os << "<text x=\"" << fixed2(L - 10) << "\" y=\"" << fixed2(py(yv) + 4) << "\" text-anchor=\"end\">"
       << detail::tick_label(yv) << "</text>\n";
  }
  os << "</g>\n";
  os << "<line x1=\"" << fixed2(L) << "\" y1=\"" << fixed2(py(reference)) << "\" x2=\"" << fixed2(W - R)
     << "\" y2=\"" << fixed2(py(reference)) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (i) os << ' ';
    os << fixed2(px(s.x[i])) << ',' << fixed2(py(s.y[i]));
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

/// Writes r_{A2} as CSV to `out` and as SVG next to it (same stem, .svg).
inline Series figure1(const std::filesystem::path& out, const Grid& grid = {}) {
  Series s = figure1_series(grid);
  write_text(out, series_to_csv(s, "r_A2"));
  std::filesystem::path svg = out;
  svg.replace_extension(".svg");
  write_text(svg, series_to_svg(s, "r_A2(x)", 0.75));
  return s;
}

}  // namespace spdcalc
