#pragma once

#include <string>
#include <vector>

#include "cola/eval/metrics.hpp"

namespace cola::eval {

// Arrows are drawn proportional to |(dx, dy)|, scaled so the longest one
// spans 0.9 of the grid spacing. All-zero fields render as dots.
std::string quiver_svg(const FieldGrid& g, const std::string& title);

struct Series {
  std::string label;
  std::vector<double> y;
  std::vector<double> band;  // optional +-band (same length as y), e.g. a std
};

std::string line_plot_svg(const std::vector<double>& x, const std::vector<Series>& series,
                          const std::string& title, const std::string& y_label);

}  // namespace cola::eval
