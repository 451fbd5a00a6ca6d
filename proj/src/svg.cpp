#include "nocl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nocl/csv.hpp"

namespace nocl {
namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 40.0, kBottom = 56.0;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

std::string tick_text(double v, bool log_scale) {
  std::ostringstream os;
  os.precision(4);
  os << (log_scale ? std::pow(10.0, v) : v);
  return os.str();
}

}  // namespace

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

void write_line_chart_svg(const std::string& path, std::span<const ChartSeries> series,
                          const ChartOptions& options) {
  // Collect plottable points (log axes drop non-positive values).
  std::vector<ChartSeries> plot;
  Range xr, yr;
  for (const ChartSeries& s : series) {
    ChartSeries p;
    p.label = s.label;
    for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
      double x = s.xs[i], y = s.ys[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (options.log_log) {
        if (x <= 0.0 || y <= 0.0) continue;
        x = std::log10(x);
        y = std::log10(y);
      }
      p.xs.push_back(x);
      p.ys.push_back(y);
      xr.add(x);
      yr.add(y);
    }
    plot.push_back(std::move(p));
  }
  if (!(xr.lo <= xr.hi)) {  // nothing plottable: emit an empty frame
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  if (xr.hi - xr.lo < 1e-12) {
    xr.lo -= 0.5;
    xr.hi += 0.5;
  }
  if (yr.hi - yr.lo < 1e-12) {
    yr.lo -= 0.5;
    yr.hi += 0.5;
  }

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << options.title << "</text>\n";

  // Axes.
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
      << "\" y2=\"" << kTop + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + ph << "\" stroke=\"black\"/>\n";

  // Min / max tick labels on each axis.
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << tick_text(xr.lo, options.log_log)
      << "</text>\n";
  out << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_text(xr.hi, options.log_log) << "</text>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_text(yr.lo, options.log_log) << "</text>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_text(yr.hi, options.log_log) << "</text>\n";

  // Axis titles.
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << options.x_label << (options.log_log ? " (log)" : "") << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">" << options.y_label << (options.log_log ? " (log)" : "")
      << "</text>\n";

  for (std::size_t s = 0; s < plot.size(); ++s) {
    const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
    if (plot[s].xs.size() >= 2) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
      for (std::size_t i = 0; i < plot[s].xs.size(); ++i)
        out << format_double(px(plot[s].xs[i])) << ',' << format_double(py(plot[s].ys[i]))
            << ' ';
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < plot[s].xs.size(); ++i)
      out << "<circle cx=\"" << format_double(px(plot[s].xs[i])) << "\" cy=\""
          << format_double(py(plot[s].ys[i])) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    // Legend entry.
    const double ly = kTop + 14.0 + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + pw - 130 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + pw - 106 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw - 100 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << plot[s].label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace nocl
