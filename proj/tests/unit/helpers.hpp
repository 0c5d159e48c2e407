#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "cola/autodiff/differentiate.hpp"
#include "cola/games/game.hpp"

namespace cola::testing {

// Fourth-order central differences of a scalar function.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-3) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    auto at = [&](double dx) {
      x[i] = x0 + dx;
      const double v = f(x);
      x[i] = x0;
      return v;
    };
    g[i] = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  return g;
}

inline double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// L^player of the game as a tape function of the joint parameters.
inline ad::VectorFn loss_fn(const games::Game& g, int player) {
  return ad::scalar_fn(g.dim(), [g, player](std::span<const ad::Var> x) {
    return games::eval_losses(g, x)[static_cast<std::size_t>(player - 1)];
  });
}

inline std::function<double(const std::vector<double>&)> loss_value(const games::Game& g,
                                                                     int player) {
  return [g, player](const std::vector<double>& x) {
    return games::eval_losses(g, x)[static_cast<std::size_t>(player - 1)];
  };
}

}  // namespace cola::testing
