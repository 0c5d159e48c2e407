#include "cola/eval/oracles.hpp"

#include <cmath>

namespace cola::eval {

TandemConsistentField::TandemConsistentField(double alpha, Branch branch)
    : UpdateField(games::game_by_name("tandem")), branch_(branch) {
  if (!(alpha > 0.0)) throw UsageError("tandem oracle: alpha must be > 0");
  const double root = std::sqrt(1.0 + 8.0 * alpha) * (branch == Branch::kPlus ? 1.0 : -1.0);
  a_ = (root - 1.0 - 4.0 * alpha) / (4.0 * alpha);
  const double den = 1.0 + 2.0 * alpha * (1.0 + a_);
  b_ = -2.0 * alpha * (1.0 + a_) / den;
  c_ = 2.0 * alpha / den;
}

std::string TandemConsistentField::name() const {
  return branch_ == Branch::kPlus ? "tandem-consistent+" : "tandem-consistent-";
}

std::vector<ad::Jet> TandemConsistentField::expand(std::span<const double> theta, int order) const {
  check_point(theta);
  const auto x = ad::identity_jets(theta, order);
  const ad::Jet f = x[0] * ad::Jet(a_) + x[1] * ad::Jet(b_) + ad::Jet(c_);
  return {f, f};
}

HamiltonianConsistentField::HamiltonianConsistentField(double alpha)
    : UpdateField(games::game_by_name("hamiltonian")), alpha_(alpha) {
  if (!(alpha > 0.0)) throw UsageError("hamiltonian oracle: alpha must be > 0");
}

std::vector<ad::Jet> HamiltonianConsistentField::expand(std::span<const double> theta, int order) const {
  check_point(theta);
  const auto x = ad::identity_jets(theta, order);
  const ad::Jet k(-alpha_ / (1.0 + 2.0 * alpha_ * alpha_));
  const ad::Jet two_a(2.0 * alpha_);
  return {k * (x[1] + two_a * x[0]), k * (two_a * x[1] - x[0])};
}

double hamiltonian_contraction(double alpha) {
  const double a2 = alpha * alpha;
  const double den = 1.0 + 2.0 * a2;
  return 1.0 - a2 * (3.0 + 4.0 * a2) / (den * den);
}

Vector oracle_tandem_hola(int n, std::span<const double> theta) {
  if (n < 0) throw UsageError("tandem HOLA oracle: n must be >= 0");
  if (theta.size() != 2) throw UsageError("tandem HOLA oracle: expected 2 parameters");
  const double v = std::ldexp(1.0, n + 2) - 2.0 * (1.0 + theta[0] + theta[1]);
  return {v, v};
}

}  // namespace cola::eval
