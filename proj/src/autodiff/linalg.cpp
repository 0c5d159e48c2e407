#include "cola/linalg.hpp"

#include <algorithm>
#include <limits>

namespace cola {

double condition_number(const Matrix& m) {
  const std::size_t n = m.rows;
  auto one_norm = [n](const Matrix& a) {
    double best = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += std::abs(a(r, c));
      best = std::max(best, s);
    }
    return best;
  };
  Matrix inv(n, n);
  try {
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<double> e(n, 0.0);
      e[c] = 1.0;
      const auto col = solve_linear(m, e);
      for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    }
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
  return one_norm(m) * one_norm(inv);
}

}  // namespace cola
