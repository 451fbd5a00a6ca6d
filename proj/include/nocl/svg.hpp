#pragma once

#include <span>
#include <string>
#include <vector>

namespace nocl {

struct ChartSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_log = false;  // plot on log10 axes (points <= 0 are dropped)
};

// Hand-rolled standalone SVG line chart: axes, min/max tick labels, one
// polyline per series, small legend.  Good enough to eyeball sweep curves.
void write_line_chart_svg(const std::string& path, std::span<const ChartSeries> series,
                          const ChartOptions& options);

// Ordinary least squares slope of y against x; pairs with non-finite
// coordinates are skipped.  Returns 0 for fewer than two usable points.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace nocl
