#include "ars/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <sstream>

namespace ars {

PlotLine plot_line(const TimeSeries& series, Index column, std::string label, std::string color, bool dashed) {
  if (column < 0 || column >= series.dim()) throw InvalidArgument("plot_line: column out of range");
  PlotLine line{std::move(label), std::move(color), {}, {}, dashed};
  for (Index j = 0; j < series.length(); ++j) {
    line.x.push_back(series.time(j));
    line.y.push_back(series.values()(j, column));
  }
  return line;
}

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Roughly five ticks at 1, 2 or 5 times a power of ten.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  return (frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::vector<PlotLine>& lines, int width, int height) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.x.size() && i < line.y.size(); ++i) {
      if (!std::isfinite(line.x[i]) || !std::isfinite(line.y[i])) continue;
      x_lo = std::min(x_lo, line.x[i]);
      x_hi = std::max(x_hi, line.x[i]);
      y_lo = std::min(y_lo, line.y[i]);
      y_hi = std::max(y_hi, line.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double left = 60, right = 150, top = 36, bottom = 40;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#444\"/>\n";

  const double xs = tick_step(x_hi - x_lo);
  for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9 * xs; t += xs) {
    os << "<line x1=\"" << px(t) << "\" x2=\"" << px(t) << "\" y1=\"" << top + ph << "\" y2=\"" << top + ph + 4
       << "\" stroke=\"#444\"/><text x=\"" << px(t) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
       << (std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
  }
  const double ys = tick_step(y_hi - y_lo);
  for (double v = std::ceil(y_lo / ys) * ys; v <= y_hi + 1e-9 * ys; v += ys) {
    os << "<line x1=\"" << left - 4 << "\" x2=\"" << left + pw << "\" y1=\"" << py(v) << "\" y2=\"" << py(v)
       << "\" stroke=\"#ddd\"/><text x=\"" << left - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
       << (std::abs(v) < 1e-12 * ys ? 0.0 : v) << "</text>\n";
  }

  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& line = lines[k];
    os << "<polyline fill=\"none\" stroke=\"" << escape(line.color) << "\" stroke-width=\"1.5\"";
    if (line.dashed) os << " stroke-dasharray=\"5,3\"";
    os << " points=\"";
    for (std::size_t i = 0; i < line.x.size() && i < line.y.size(); ++i) {
      if (!std::isfinite(line.y[i])) continue;
      // Clamp diverging forecasts to the frame instead of dropping them.
      const double y = std::clamp(py(line.y[i]), top - 2.0, top + ph + 2.0);
      os << px(line.x[i]) << ',' << y << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 34 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << escape(line.color) << "\" stroke-width=\"2\""
       << (line.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/><text x=\"" << left + pw + 40 << "\" y=\""
       << ly + 4 << "\">" << escape(line.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ars
