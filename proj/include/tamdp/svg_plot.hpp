#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tamdp {

struct PlotSeries {
  std::string label;
  std::vector<double> mean;
  /// Empty, or one value per episode for a +-std band.
  std::vector<double> std;
};

struct PlotOptions {
  int width = 960;
  int height = 420;
  std::string title;
  /// Draws phase separators and labels when non-zero.
  std::size_t episodes_per_phase = 0;
  std::vector<std::string> phase_names;
  /// Episodes averaged into one drawn point (0 picks about one per pixel).
  std::size_t bucket = 0;
};

/// Learning curves as a standalone SVG document.
std::string learning_curve_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace tamdp
