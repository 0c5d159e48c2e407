#pragma once

// Gradient, partial-gradient and Jacobian entry points over the reverse-mode
// tape. Every function comes in two flavours: on plain doubles (opens its own
// tape, returns numbers) and on Vars (records onto the caller's tape, so the
// result can be differentiated again).

#include <functional>
#include <span>
#include <vector>

#include "cola/autodiff/var.hpp"
#include "cola/linalg.hpp"
#include "cola/types.hpp"

namespace cola::ad {

struct VectorFn {
  int input_dim = 0;
  int output_dim = 1;
  std::function<std::vector<Var>(std::span<const Var>)> body;
};

// Scalar function from a one-output body.
VectorFn scalar_fn(int input_dim, std::function<Var(std::span<const Var>)> body);

std::vector<double> grad(const VectorFn& f, std::span<const double> x);
std::vector<Var> grad(const VectorFn& f, std::span<const Var> x);

// Block of the gradient belonging to player 1 (first d1 coordinates) or 2.
std::vector<double> partial_grad(const VectorFn& f, const JointParams& x, int player);
std::vector<Var> partial_grad(const VectorFn& f, std::span<const Var> x, std::size_t d1,
                              int player);

Matrix jacobian(const VectorFn& f, std::span<const double> x);
DenseMatrix<Var> jacobian(const VectorFn& f, std::span<const Var> x);

// Differentiates x^(depth+1) `depth` times through nested grad calls at x and
// compares with (depth+1)! * x. True iff the relative error is below 1e-9.
bool nest_check(int depth, double x = 1.0);

}  // namespace cola::ad
