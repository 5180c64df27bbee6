#pragma once

#include <string>
#include <vector>

namespace bmhd::cli {

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
};

/// Line chart. Points that are non-finite, or non-positive on a log axis,
/// break the polyline.
struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = true;
  bool log_y = true;
  std::vector<PlotSeries> series;
  std::vector<double> hlines;  // horizontal reference lines (e.g. zero)
  std::vector<std::string> notes;
  int width = 720;
  int height = 480;
};

/// Deterministic SVG text (fixed-precision coordinates). An empty plot
/// (no drawable point) is an Input error.
std::string render_svg(const PlotSpec& spec);

}  // namespace bmhd::cli
