#include "oamspec/svg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace oamspec {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

double series_max(std::span<const PlotSeries> series) {
  double top = 0.0;
  for (const auto& s : series)
    for (double v : s.values)
      if (std::isfinite(v)) top = std::max(top, v);
  return top > 0.0 ? top : 1.0;
}

std::string header(std::string_view title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{3}</text>\n"
      "<line x1=\"{4}\" y1=\"{5}\" x2=\"{6}\" y2=\"{5}\" stroke=\"black\"/>\n"
      "<line x1=\"{4}\" y1=\"{7}\" x2=\"{4}\" y2=\"{5}\" stroke=\"black\"/>\n",
      kWidth, kHeight, kWidth / 2, escape(title), kLeft, kHeight - kBottom, kWidth - kRight, kTop);
}

std::string y_axis(double top) {
  std::string out;
  for (int i = 0; i <= 4; ++i) {
    const double v = top * i / 4;
    const double y = kHeight - kBottom - (kHeight - kTop - kBottom) * i / 4;
    out += fmt::format("<text x=\"{}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
                       "text-anchor=\"end\">{:.3g}</text>\n",
                       kLeft - 4, y + 3, v);
  }
  return out;
}

std::string legend(std::span<const PlotSeries> series) {
  std::string out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double x = kWidth - kRight - 150;
    const double y = kTop + 14 * i;
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>", x, y, series[i].color);
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n", x + 14,
                       y + 9, escape(series[i].name));
  }
  return out;
}

}  // namespace

std::string render_bar_svg(std::span<const int> labels, std::span<const PlotSeries> series, std::string_view title) {
  for (const auto& s : series)
    if (s.values.size() != labels.size()) throw std::invalid_argument("bar series length differs from labels");
  const double top = series_max(series);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double group = labels.empty() ? plot_w : plot_w / labels.size();
  const double bar = series.empty() ? group : 0.8 * group / series.size();
  std::string out = header(title) + y_axis(top);
  const std::size_t stride = std::max<std::size_t>(1, labels.size() / 20);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double gx = kLeft + group * i + 0.1 * group;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = std::max(0.0, series[s].values[i]);
      const double h = plot_h * v / top;
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                         gx + bar * s, kHeight - kBottom - h, bar, h, series[s].color);
    }
    if (i % stride == 0)
      out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" "
                         "text-anchor=\"middle\">{}</text>\n",
                         kLeft + group * (i + 0.5), kHeight - kBottom + 14, labels[i]);
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                     "text-anchor=\"middle\">l</text>\n",
                     kWidth / 2, kHeight - 12);
  return out + legend(series) + "</svg>\n";
}

std::string render_line_svg(std::span<const double> x, std::span<const PlotSeries> series, std::string_view title,
                            std::string_view x_label) {
  for (const auto& s : series)
    if (s.values.size() != x.size()) throw std::invalid_argument("line series length differs from x");
  const double top = series_max(series);
  const double x0 = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  const double x1 = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  const double span = x1 > x0 ? x1 - x0 : 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  std::string out = header(title) + y_axis(top);
  for (const auto& s : series) {
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i)
      out += fmt::format("{:.2f},{:.2f} ", kLeft + plot_w * (x[i] - x0) / span,
                         kHeight - kBottom - plot_h * std::max(0.0, s.values[i]) / top);
    out += "\"/>\n";
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\">{:.4g}</text>\n", kLeft,
                     kHeight - kBottom + 14, x0);
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" "
                     "text-anchor=\"end\">{:.4g}</text>\n",
                     kWidth - kRight, kHeight - kBottom + 14, x1);
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                     "text-anchor=\"middle\">{}</text>\n",
                     kWidth / 2, kHeight - 12, escape(x_label));
  return out + legend(series) + "</svg>\n";
}

}  // namespace oamspec
