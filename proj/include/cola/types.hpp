#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cola/linalg.hpp"

namespace cola {

// Both players' parameters, kept as one flat vector (theta1 first) plus the
// split point so the same buffer can feed autodiff inputs directly.
struct JointParams {
  Vector theta1;
  Vector theta2;

  std::size_t size() const { return theta1.size() + theta2.size(); }
  Vector flat() const {
    Vector v(theta1);
    v.insert(v.end(), theta2.begin(), theta2.end());
    return v;
  }
  static JointParams split(std::span<const double> flat, std::size_t d1) {
    return {Vector(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(d1)),
            Vector(flat.begin() + static_cast<std::ptrdiff_t>(d1), flat.end())};
  }
};

}  // namespace cola
