#pragma once

#include <string>
#include <vector>

namespace nwidths::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = true;
};

struct LogLogPlot {
  std::string title;
  std::string xlabel = "n + 1";
  std::string ylabel = "width estimate";
  std::vector<Series> series;
};

/// Static SVG line chart with logarithmic axes. Non-positive points are skipped.
std::string render_svg(const LogLogPlot& plot);

}  // namespace nwidths::cli
