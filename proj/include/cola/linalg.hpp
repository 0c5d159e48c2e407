#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cola/autodiff/scalar.hpp"
#include "cola/errors.hpp"

namespace cola {

using Vector = std::vector<double>;

// Small dense row-major matrix over any autodiff scalar.
template <class S>
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<S> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, const S& fill = S(0.0))
      : rows(r), cols(c), data(r * c, fill) {}

  S& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }
};

using Matrix = DenseMatrix<double>;

template <class S>
std::vector<S> multiply(const DenseMatrix<S>& m, const std::vector<S>& x) {
  std::vector<S> y(m.rows, S(0.0));
  for (std::size_t i = 0; i < m.rows; ++i) {
    S acc(0.0);
    for (std::size_t j = 0; j < m.cols; ++j) acc = acc + m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

// 1-norm condition number of a plain matrix via explicit inverse (n is tiny).
double condition_number(const Matrix& m);

// Solves m x = b with LU and partial pivoting, pivoting on the values of the
// entries. Works for Var and Jet entries, so the solution stays differentiable.
template <class S>
std::vector<S> solve_linear(DenseMatrix<S> m, std::vector<S> b) {
  using ad::value;
  const std::size_t n = m.rows;
  if (m.cols != n || b.size() != n) throw UsageError("solve_linear: shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(value(m(k, k)));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(value(m(r, k)));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) throw NumericError("solve_linear: singular matrix", static_cast<int>(k));
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(pivot, c));
      std::swap(b[k], b[pivot]);
    }
    const S inv = S(1.0) / m(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (value(m(r, k)) == 0.0 && std::is_same_v<S, double>) continue;
      const S f = m(r, k) * inv;
      for (std::size_t c = k + 1; c < n; ++c) m(r, c) = m(r, c) - f * m(k, c);
      b[r] = b[r] - f * b[k];
    }
  }
  std::vector<S> x(n, S(0.0));
  for (std::size_t i = n; i-- > 0;) {
    S acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc = acc - m(i, c) * x[c];
    x[i] = acc / m(i, i);
  }
  return x;
}

}  // namespace cola
