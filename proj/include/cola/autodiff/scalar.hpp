#pragma once

// Plain-double overloads matching the Var and Jet math functions so that game
// losses and update rules can be written once as templates over the scalar.

#include <algorithm>
#include <cmath>

#include "cola/autodiff/jet.hpp"
#include "cola/autodiff/var.hpp"

namespace cola::ad {

inline double value(double x) { return x; }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double recip(double x) { return 1.0 / x; }
inline double relu(double x) { return std::max(x, 0.0); }
inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

template <class S>
concept Scalar = requires(S a, S b) {
  { a + b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { value(a) } -> std::convertible_to<double>;
};

}  // namespace cola::ad
