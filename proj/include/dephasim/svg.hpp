#pragma once

#include <string>
#include <vector>

namespace dephasim {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Writes a static SVG line chart (axes, ticks, legend). Deterministic:
/// the same data always produces the same bytes.
void write_svg_line_chart(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series);

}  // namespace dephasim
