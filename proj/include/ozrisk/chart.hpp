#pragma once

// SVG line chart of a single-term sweep: risk against bound, one line per
// redraw frequency, with a red square on the default cell (+/-2 sd, daily).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ozrisk/sweep.hpp"

namespace ozrisk {

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline constexpr double kDefaultBoundSd = 2.0;

inline void write_sweep_svg(std::ostream& os, const SweepResult& result,
                            const std::string& title = {}) {
  if (result.terms.size() != 1)
    throw ConfigError("only single-term sweeps can be charted; joint grids are tables");
  const SweptTerm term = result.terms.front();

  // frequency -> (bound, risk) in row order
  std::map<Redraw, std::vector<std::pair<double, double>>> series;
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_max = 0.0;
  for (const auto& r : result.rows) {
    const double b = r.bound(term);
    if (!std::isfinite(b)) throw ConfigError("cannot chart an infinite bound");
    x_lo = std::min(x_lo, b);
    x_hi = std::max(x_hi, b);
    if (!r.error.empty()) continue;
    series[r.frequency].emplace_back(b, r.risk_pct);
    y_max = std::max(y_max, r.risk_pct);
  }
  if (result.rows.empty()) x_lo = 0.0, x_hi = 4.0;
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  y_max = std::clamp(std::ceil(y_max / 10.0) * 10.0, 10.0, 100.0);

  constexpr double W = 640, H = 420, L = 70, R = 130, T = 44, B = 56;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return T + ph - y / y_max * ph; };

  const std::string heading =
      title.empty() ? "Population risk vs bound on " + std::string(to_string(term)) : title;

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << detail::fmt2(L + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << detail::xml_escape(heading) << "</text>\n";

  // axes
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
     << "\"/>\n"
     << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\"/>\n"
     << "</g>\n";

  // x ticks at grid values (thinned when dense)
  std::vector<double> xs;
  for (const auto& r : result.rows) xs.push_back(r.bound(term));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const std::size_t stride = xs.size() > 12 ? (xs.size() + 11) / 12 : 1;
  os << "<g text-anchor=\"middle\">\n";
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    const double x = px(xs[i]);
    os << "<line x1=\"" << detail::fmt2(x) << "\" y1=\"" << T + ph << "\" x2=\"" << detail::fmt2(x)
       << "\" y2=\"" << T + ph + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << detail::fmt2(x) << "\" y=\"" << T + ph + 18 << "\">&#177;"
       << detail::format_bound(xs[i]) << "</text>\n";
  }
  os << "</g>\n";
  os << "<g text-anchor=\"end\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = y_max * i / 5.0;
    const double y = py(v);
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << detail::fmt2(y) << "\" x2=\"" << L + pw
       << "\" y2=\"" << detail::fmt2(y) << "\" stroke=\"#dddddd\"/>"
       << "<text x=\"" << L - 8 << "\" y=\"" << detail::fmt2(y + 4) << "\">" << detail::format_bound(v)
       << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << detail::fmt2(L + pw / 2) << "\" y=\"" << H - 14
     << "\" text-anchor=\"middle\">Bound on " << to_string(term) << " (standard deviations)</text>\n"
     << "<text transform=\"translate(18," << detail::fmt2(T + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">Population with dFEV1 decrement (%)</text>\n";

  int legend_row = 0;
  for (const auto& [freq, pts] : series) {
    const char* color = freq == Redraw::Daily ? "#1f77b4" : "#ff7f0e";
    os << "<polyline class=\"series\" data-frequency=\"" << to_string(freq)
       << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      os << (i ? " " : "") << detail::fmt2(px(pts[i].first)) << ',' << detail::fmt2(py(pts[i].second));
    }
    os << "\"/>\n";
    const double ly = T + 10 + 20 * legend_row++;
    os << "<line x1=\"" << L + pw + 14 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 38 << "\" y2=\""
       << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
       << "<text x=\"" << L + pw + 44 << "\" y=\"" << ly + 4 << "\">"
       << (freq == Redraw::Daily ? "Daily draws" : "Hourly draws") << "</text>\n";
  }

  if (auto it = series.find(Redraw::Daily); it != series.end()) {
    for (const auto& [b, risk] : it->second) {
      if (b != kDefaultBoundSd) continue;
      os << "<rect class=\"default-marker\" x=\"" << detail::fmt2(px(b) - 5) << "\" y=\""
         << detail::fmt2(py(risk) - 5) << "\" width=\"10\" height=\"10\" fill=\"red\"/>\n";
      const double ly = T + 10 + 20 * legend_row;
      os << "<rect x=\"" << L + pw + 21 << "\" y=\"" << ly - 5
         << "\" width=\"10\" height=\"10\" fill=\"red\"/>"
         << "<text x=\"" << L + pw + 44 << "\" y=\"" << ly + 4 << "\">Default (&#177;2, daily)</text>\n";
    }
  }
  os << "</svg>\n";
}

inline void emit_chart(const SweepResult& result, const std::string& path,
                       const std::string& title = {}) {
  if (result.terms.size() != 1)
    throw ConfigError("only single-term sweeps can be charted; joint grids are tables");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_sweep_svg(out, result, title);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace ozrisk
