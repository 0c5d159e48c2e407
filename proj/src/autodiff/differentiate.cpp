#include "cola/autodiff/differentiate.hpp"

#include <cmath>
#include <string>

#include "cola/errors.hpp"

namespace cola::ad {
namespace {

void check_inputs(const VectorFn& f, std::size_t n) {
  if (static_cast<int>(n) != f.input_dim) {
    throw UsageError("autodiff: function expects " + std::to_string(f.input_dim) +
                     " inputs, got " + std::to_string(n));
  }
}

template <class T>
void check_finite_inputs(std::span<const T> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(value(x[i]))) {
      throw NumericError("autodiff: non-finite input", static_cast<int>(i));
    }
  }
}

std::vector<Var> evaluate(const VectorFn& f, std::span<const Var> x) {
  auto y = f.body(x);
  if (static_cast<int>(y.size()) != f.output_dim) {
    throw UsageError("autodiff: function produced " + std::to_string(y.size()) +
                     " outputs, declared " + std::to_string(f.output_dim));
  }
  return y;
}

bool all_constant(std::span<const Var> x) {
  for (const Var& v : x) {
    if (!v.is_constant()) return false;
  }
  return true;
}

std::vector<double> values_of(std::span<const Var> x) {
  std::vector<double> v;
  v.reserve(x.size());
  for (const Var& e : x) v.push_back(e.value());
  return v;
}

template <class T>
std::vector<T> block(const std::vector<T>& g, std::size_t d1, int player) {
  if (player == 1) return {g.begin(), g.begin() + static_cast<std::ptrdiff_t>(d1)};
  if (player == 2) return {g.begin() + static_cast<std::ptrdiff_t>(d1), g.end()};
  throw UsageError("autodiff: player must be 1 or 2");
}

}  // namespace

VectorFn scalar_fn(int input_dim, std::function<Var(std::span<const Var>)> body) {
  return VectorFn{input_dim, 1, [body = std::move(body)](std::span<const Var> x) {
                    return std::vector<Var>{body(x)};
                  }};
}

std::vector<double> grad(const VectorFn& f, std::span<const double> x) {
  check_inputs(f, x.size());
  check_finite_inputs(x);
  TapeScope scope;
  std::vector<Var> leaves;
  leaves.reserve(x.size());
  for (double v : x) leaves.push_back(Var::leaf(v));
  const auto y = evaluate(f, leaves);
  auto g = gradient_values(y[0], leaves);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw NumericError("autodiff: non-finite gradient", static_cast<int>(i));
  }
  return g;
}

std::vector<Var> grad(const VectorFn& f, std::span<const Var> x) {
  check_inputs(f, x.size());
  check_finite_inputs(x);
  if (Tape::active() == nullptr) {
    if (!all_constant(x)) throw UsageError("autodiff: Var inputs without an active tape");
    const auto g = grad(f, values_of(x));
    return {g.begin(), g.end()};
  }
  const auto inputs = fresh(x);
  const auto y = evaluate(f, inputs);
  return gradient(y[0], inputs);
}

std::vector<double> partial_grad(const VectorFn& f, const JointParams& x, int player) {
  return block(grad(f, x.flat()), x.theta1.size(), player);
}

std::vector<Var> partial_grad(const VectorFn& f, std::span<const Var> x, std::size_t d1,
                              int player) {
  return block(grad(f, x), d1, player);
}

Matrix jacobian(const VectorFn& f, std::span<const double> x) {
  check_inputs(f, x.size());
  check_finite_inputs(x);
  TapeScope scope;
  std::vector<Var> leaves;
  for (double v : x) leaves.push_back(Var::leaf(v));
  const auto y = evaluate(f, leaves);
  Matrix j(y.size(), x.size());
  for (std::size_t r = 0; r < y.size(); ++r) {
    const auto g = gradient_values(y[r], leaves);
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (!std::isfinite(g[c])) throw NumericError("autodiff: non-finite Jacobian entry", static_cast<int>(c));
      j(r, c) = g[c];
    }
  }
  return j;
}

DenseMatrix<Var> jacobian(const VectorFn& f, std::span<const Var> x) {
  check_inputs(f, x.size());
  if (Tape::active() == nullptr) {
    if (!all_constant(x)) throw UsageError("autodiff: Var inputs without an active tape");
    const Matrix m = jacobian(f, values_of(x));
    DenseMatrix<Var> out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = m.data[i];
    return out;
  }
  const auto inputs = fresh(x);
  const auto y = evaluate(f, inputs);
  DenseMatrix<Var> j(y.size(), x.size());
  for (std::size_t r = 0; r < y.size(); ++r) {
    const auto g = gradient(y[r], inputs);
    for (std::size_t c = 0; c < g.size(); ++c) j(r, c) = g[c];
  }
  return j;
}

bool nest_check(int depth, double x) {
  if (depth < 1) return false;
  try {
    // level 0 is x^(depth+1); level k differentiates level k-1 once.
    std::function<Var(std::span<const Var>, int)> level = [&](std::span<const Var> v,
                                                             int k) -> Var {
      if (k == 0) {
        Var p(1.0);
        for (int i = 0; i <= depth; ++i) p = p * v[0];
        return p;
      }
      const VectorFn inner = scalar_fn(1, [&, k](std::span<const Var> u) { return level(u, k - 1); });
      return grad(inner, v)[0];
    };
    const VectorFn outer = scalar_fn(1, [&](std::span<const Var> u) { return level(u, depth - 1); });
    const double got = grad(outer, std::span<const double>(&x, 1))[0];
    double expected = x;
    for (int i = 2; i <= depth + 1; ++i) expected *= i;
    const double scale = std::max(std::abs(expected), 1e-300);
    return std::abs(got - expected) / scale < 1e-9;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace cola::ad
