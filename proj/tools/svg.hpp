#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cachedof::cli {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Minimal line plot: linear axes fitted to the data, one polyline per
/// series, a legend, and tick labels at the axis ends and midpoint.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series);

}  // namespace cachedof::cli
