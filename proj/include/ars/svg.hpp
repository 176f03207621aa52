#pragma once

#include "ars/series.hpp"

#include <string>
#include <vector>

namespace ars {

struct PlotLine {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// One column of a series against its time axis.
PlotLine plot_line(const TimeSeries& series, Index column, std::string label, std::string color, bool dashed = false);

/// Static SVG line chart with axes, tick labels and a legend.
std::string render_line_chart(const std::string& title, const std::vector<PlotLine>& lines, int width = 760,
                              int height = 380);

}  // namespace ars
