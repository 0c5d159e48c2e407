#pragma once

// Closed-form reference fields.

#include "cola/shapers/update_field.hpp"

namespace cola::eval {

enum class Branch { kPlus, kMinus };

// Consistent linear Tandem fields f1 = f2 = a x + b y + c with
// a = (+-sqrt(1 + 8 alpha) - 1 - 4 alpha) / (4 alpha),
// b = -2 alpha (1 + a) / (1 + 2 alpha (1 + a)), c = 2 alpha / (1 + 2 alpha (1 + a)).
// At alpha = 1: plus -> -(x + y - 2) / 2, minus -> -2 (x + y + 1).
class TandemConsistentField : public shapers::UpdateField {
 public:
  TandemConsistentField(double alpha, Branch branch);
  std::string name() const override;
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

 private:
  Branch branch_;
  double a_, b_, c_;
};

// The linear consistent Hamiltonian field
// -alpha / (1 + 2 alpha^2) * (y + 2 alpha x, -x + 2 alpha y).
class HamiltonianConsistentField : public shapers::UpdateField {
 public:
  explicit HamiltonianConsistentField(double alpha);
  std::string name() const override { return "hamiltonian-consistent"; }
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;

 private:
  double alpha_;
};

// Squared-norm contraction per step under the field above:
// 1 - alpha^2 (3 + 4 alpha^2) / (1 + 2 alpha^2)^2.
double hamiltonian_contraction(double alpha);

// Exact HOLA-n on Tandem at alpha = 1: both players get 2^(n+2) - 2 (1 + x + y).
Vector oracle_tandem_hola(int n, std::span<const double> theta);

}  // namespace cola::eval
