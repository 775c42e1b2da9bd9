#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "pswitch/csv.hpp"
#include "pswitch/errors.hpp"

namespace pswitch::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // NaN entries break the line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 960;
  int height = 580;
  bool log_x = false;  // decade ticks; requires positive x data
};

namespace detail {

struct Range {
  double lo = 0.0, hi = 1.0;
};

inline Range data_range(const std::vector<Series>& series, bool use_x) {
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (const auto& s : series) {
    const auto& v = use_x ? s.x : s.y;
    for (double d : v) {
      if (!std::isfinite(d)) continue;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  if (!(lo <= hi)) throw validation_error("svg plot has no finite data");
  if (lo == hi) {  // widen a degenerate range
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi};
}

// Largest 1/2/5 x 10^k step giving at most `most` intervals over the span.
inline double nice_step(double span, int most) {
  const double raw = span / static_cast<double>(most);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) return mag * m;
  }
  return mag * 10.0;
}

inline std::string trim_number(double v) {
  // round tiny float fuzz from tick arithmetic before printing
  const double r = std::round(v * 1e9) / 1e9;
  return csv::format_double(r == 0.0 ? 0.0 : r);
}

}  // namespace detail

// Minimal standalone line plot: axes, 1/2/5-stepped ticks (decades on a log
// x-axis), one polyline per series, legend in the top-right corner. Points
// with non-finite y split the polyline instead of being interpolated over.
inline void write_plot(std::ostream& out, const PlotSpec& spec,
                       const std::vector<Series>& series) {
  static const char* palette[] = {"#1f6fb2", "#c23b3b", "#2e8b57",
                                  "#d97f00", "#7b52ab", "#5f6a72"};
  const int ml = 72, mr = 24, mt = 44, mb = 56;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;

  auto xr = detail::data_range(series, true);
  auto yr = detail::data_range(series, false);
  if (spec.log_x && !(xr.lo > 0.0))
    throw validation_error("log x-axis needs positive x data");
  const double pad = 0.04 * (yr.hi - yr.lo);
  yr.lo -= pad;
  yr.hi += pad;

  auto xpos = [&](double x) {
    const double u = spec.log_x
                         ? (std::log10(x) - std::log10(xr.lo)) /
                               (std::log10(xr.hi) - std::log10(xr.lo))
                         : (x - xr.lo) / (xr.hi - xr.lo);
    return ml + u * pw;
  };
  auto ypos = [&](double y) { return mt + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };
  auto num = detail::trim_number;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
      << ' ' << spec.height << "\">\n";
  out << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"24\" font-size=\"16\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">"
      << spec.title << "</text>\n";

  // tick positions
  std::vector<double> xticks;
  if (spec.log_x) {
    const int k0 = static_cast<int>(std::ceil(std::log10(xr.lo) - 1e-9));
    const int k1 = static_cast<int>(std::floor(std::log10(xr.hi) + 1e-9));
    for (int k = k0; k <= k1; ++k) xticks.push_back(std::pow(10.0, k));
  } else {
    const double step = detail::nice_step(xr.hi - xr.lo, 8);
    for (double t = std::ceil(xr.lo / step) * step; t <= xr.hi + 1e-9 * step;
         t += step)
      xticks.push_back(t);
  }
  std::vector<double> yticks;
  {
    const double step = detail::nice_step(yr.hi - yr.lo, 7);
    for (double t = std::ceil(yr.lo / step) * step; t <= yr.hi + 1e-9 * step;
         t += step)
      yticks.push_back(t);
  }

  // grid + tick labels
  for (double t : xticks) {
    const double x = xpos(t);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << mt << "\" x2=\"" << num(x)
        << "\" y2=\"" << mt + ph << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 18
        << "\" font-size=\"12\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << num(t) << "</text>\n";
  }
  for (double t : yticks) {
    const double y = ypos(t);
    out << "<line x1=\"" << ml << "\" y1=\"" << num(y) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << num(y) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << num(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\" "
           "font-family=\"sans-serif\">"
        << num(t) << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 12
      << "\" font-size=\"14\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\">"
      << spec.x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">" << spec.y_label << "</text>\n";

  // series
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % (sizeof palette / sizeof *palette)];
    const auto& sr = series[s];
    if (sr.x.size() != sr.y.size())
      throw validation_error("svg series x/y length mismatch");
    std::string points;
    auto flush = [&] {
      if (points.empty()) return;
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.6\" points=\"" << points << "\"/>\n";
      points.clear();
    };
    for (std::size_t i = 0; i < sr.x.size(); ++i) {
      if (!std::isfinite(sr.x[i]) || !std::isfinite(sr.y[i])) {
        flush();
        continue;
      }
      points += num(xpos(sr.x[i]));
      points += ',';
      points += num(ypos(sr.y[i]));
      points += ' ';
    }
    flush();
  }

  // legend
  if (series.size() > 1 || (series.size() == 1 && !series[0].label.empty())) {
    const double lx = ml + pw - 180, ly = mt + 10;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const char* color = palette[s % (sizeof palette / sizeof *palette)];
      const double y = ly + 18.0 * static_cast<double>(s);
      out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(y + 4)
          << "\" x2=\"" << num(lx + 24) << "\" y2=\"" << num(y + 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(y + 8)
          << "\" font-size=\"12\" font-family=\"sans-serif\">"
          << series[s].label << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace pswitch::svg
