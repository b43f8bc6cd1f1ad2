#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oamspec {

struct PlotSeries {
  std::string name;
  std::string color;
  std::vector<double> values;
};

/// Grouped bar chart, one group per x label.
std::string render_bar_svg(std::span<const int> labels, std::span<const PlotSeries> series, std::string_view title);

/// Polyline chart sharing one x axis.
std::string render_line_svg(std::span<const double> x, std::span<const PlotSeries> series, std::string_view title,
                            std::string_view x_label);

}  // namespace oamspec
