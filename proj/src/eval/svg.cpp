#include "cola/eval/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cola::eval {
namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 48.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

void open(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"14\">" << esc(title) << "</text>\n"
     << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
     << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
}

void axis_labels(std::ostringstream& os, double x0, double x1, double y0, double y1) {
  auto label = [&os](double x, double y, double v, const char* anchor) {
    os << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << v << "</text>\n";
  };
  label(kMargin, kHeight - kMargin + 14, x0, "start");
  label(kWidth - kMargin, kHeight - kMargin + 14, x1, "end");
  label(kMargin - 4, kHeight - kMargin, y0, "end");
  label(kMargin - 4, kMargin + 8, y1, "end");
}

}  // namespace

std::string quiver_svg(const FieldGrid& g, const std::string& title) {
  std::ostringstream os;
  open(os, title);
  const double lo_x = g.xs.front(), hi_x = g.xs.back();
  const double lo_y = g.ys.front(), hi_y = g.ys.back();
  const double inner = kWidth - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (x - lo_x) / (hi_x - lo_x) * inner; };
  auto py = [&](double y) { return kHeight - kMargin - (y - lo_y) / (hi_y - lo_y) * inner; };
  double longest = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) longest = std::max(longest, std::hypot(g.dx[k], g.dy[k]));
  const double spacing = inner / static_cast<double>(std::max<std::size_t>(g.xs.size() - 1, 1));
  const double scale = longest > 0.0 ? 0.9 * spacing / longest : 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x0 = px(g.x[k]);
    const double y0 = py(g.y[k]);
    const double ex = g.dx[k] * scale;
    const double ey = -g.dy[k] * scale;
    const double len = std::hypot(ex, ey);
    if (len < 0.5) {
      os << "<circle cx=\"" << x0 << "\" cy=\"" << y0 << "\" r=\"1\" fill=\"#333\"/>\n";
      continue;
    }
    const double ux = ex / len, uy = ey / len;
    const double head = std::min(4.0, 0.4 * len);
    const double tx = x0 + ex, ty = y0 + ey;
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << tx << "\" y2=\"" << ty
       << "\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n"
       << "<polygon points=\"" << tx << ',' << ty << ' ' << tx - head * ux + head * 0.5 * uy << ','
       << ty - head * uy - head * 0.5 * ux << ' ' << tx - head * ux - head * 0.5 * uy << ','
       << ty - head * uy + head * 0.5 * ux << "\" fill=\"#1f77b4\"/>\n";
  }
  axis_labels(os, lo_x, hi_x, lo_y, hi_y);
  os << "</svg>\n";
  return os.str();
}

std::string line_plot_svg(const std::vector<double>& x, const std::vector<Series>& series,
                          const std::string& title, const std::string& y_label) {
  std::ostringstream os;
  open(os, title);
  double y_lo = HUGE_VAL, y_hi = -HUGE_VAL;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      const double b = s.band.empty() ? 0.0 : s.band[i];
      if (!std::isfinite(s.y[i])) continue;
      y_lo = std::min(y_lo, s.y[i] - b);
      y_hi = std::max(y_hi, s.y[i] + b);
    }
  }
  if (!(y_lo < y_hi)) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double x_lo = x.empty() ? 0.0 : x.front();
  const double x_hi = x.size() < 2 ? x_lo + 1.0 : x.back();
  const double inner = kWidth - 2 * kMargin;
  auto px = [&](double v) { return kMargin + (v - x_lo) / (x_hi - x_lo) * inner; };
  auto py = [&](double v) { return kHeight - kMargin - (v - y_lo) / (y_hi - y_lo) * inner; };
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
    const std::size_t n = std::min(x.size(), sr.y.size());
    if (!sr.band.empty() && n > 0) {
      os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < n; ++i) os << px(x[i]) << ',' << py(sr.y[i] + sr.band[i]) << ' ';
      for (std::size_t i = n; i-- > 0;) os << px(x[i]) << ',' << py(sr.y[i] - sr.band[i]) << ' ';
      os << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(sr.y[i])) os << px(x[i]) << ',' << py(sr.y[i]) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << kMargin + 8 << "\" y=\"" << kMargin + 16 + 14 * static_cast<double>(s)
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << esc(sr.label)
       << "</text>\n";
  }
  os << "<text x=\"14\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 14 " << kHeight / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << esc(y_label)
     << "</text>\n";
  axis_labels(os, x_lo, x_hi, y_lo, y_hi);
  os << "</svg>\n";
  return os.str();
}

}  // namespace cola::eval
