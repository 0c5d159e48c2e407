#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A Jet of order k over m variables stores the polynomial coefficients of a
// function's Taylor expansion around a base point, for all monomials of total
// degree <= k. Monomials are ordered by total degree, so a lower-order jet is a
// prefix of a higher-order one. Arithmetic truncates at the smaller order of
// the operands; partial derivatives lower the order by one. This gives exact
// derivatives of any order without re-recording, which the higher-order
// shaping recursions need.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace cola::ad {

class JetSpace {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct Derivative {
    std::uint32_t source;
    std::uint32_t target;
    double factor;
  };

  // Shared, immutable; safe to use from any thread.
  static std::shared_ptr<const JetSpace> get(int vars, int max_order);

  int vars() const { return vars_; }
  int max_order() const { return max_order_; }
  // Number of monomials of total degree <= order.
  std::size_t size(int order) const { return offsets_[static_cast<size_t>(order) + 1]; }
  std::span<const Product> products(int order) const;
  // Entries mapping monomials of degree in [1, order] to d/dx_var.
  std::span<const Derivative> derivative(int var, int order) const;
  const std::vector<int>& exponents(std::size_t monomial) const { return monomials_[monomial]; }

  JetSpace(int vars, int max_order);

 private:
  int vars_;
  int max_order_;
  std::vector<std::vector<int>> monomials_;
  std::vector<std::size_t> offsets_;          // offsets_[d] = first monomial of degree d
  std::vector<Product> products_;
  std::vector<std::size_t> product_offsets_;  // by output degree
  std::vector<std::vector<Derivative>> derivatives_;
  std::vector<std::vector<std::size_t>> derivative_offsets_;
};

class Jet {
 public:
  // A constant with no space attached; combines with any jet.
  Jet(double constant = 0.0) : coeffs_{constant} {}  // NOLINT

  static Jet constant(std::shared_ptr<const JetSpace> space, int order, double c);
  // x_var expanded around `value`.
  static Jet variable(std::shared_ptr<const JetSpace> space, int order, int var,
                      double value);

  double value() const { return coeffs_[0]; }
  int order() const { return space_ ? order_ : 0; }
  bool is_scalar() const { return space_ == nullptr; }
  const std::shared_ptr<const JetSpace>& space() const { return space_; }
  std::span<const double> coefficients() const { return coeffs_; }

  // Partial derivative with respect to variable `var`; order drops by one.
  Jet derivative(int var) const;
  // Same function, fewer terms.
  Jet truncated(int order) const;
  // d^|e| f / dx^e at the base point for the monomial with exponents e.
  double partial(std::span<const int> exponents) const;

  // sum_k taylor[k] * (a - a(0))^k, i.e. g(a) for a univariate g whose
  // Taylor coefficients at a(0) are `taylor` (needs order()+1 entries).
  static Jet compose(const Jet& a, std::span<const double> taylor);

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a);

 private:
  Jet(std::shared_ptr<const JetSpace> space, int order, std::vector<double> c)
      : space_(std::move(space)), order_(order), coeffs_(std::move(c)) {}

  std::shared_ptr<const JetSpace> space_;
  int order_ = 0;
  std::vector<double> coeffs_;
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet recip(const Jet& a);
Jet sigmoid(const Jet& a);
Jet tanh(const Jet& a);
// Piecewise: identity above zero, zero otherwise (derivatives almost everywhere).
Jet relu(const Jet& a);

inline double value(const Jet& j) { return j.value(); }

// Identity jets x_0..x_{n-1} around `point`.
std::vector<Jet> identity_jets(std::span<const double> point, int order);

}  // namespace cola::ad
