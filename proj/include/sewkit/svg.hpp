#pragma once

#include <string>
#include <vector>

namespace sewkit {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

// A self-contained SVG line chart with markers, axes, ticks and a legend.
// Nonpositive values are dropped on log axes.
std::string render_svg(const PlotSpec& spec);
void write_svg(const std::string& path, const PlotSpec& spec);

}  // namespace sewkit
