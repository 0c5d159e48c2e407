#include "cola/autodiff/jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "cola/errors.hpp"

namespace cola::ad {
namespace {

void enumerate_degree(int vars, int degree, int var, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (var == vars - 1) {
    current[static_cast<size_t>(var)] = degree;
    out.push_back(current);
    current[static_cast<size_t>(var)] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<size_t>(var)] = e;
    enumerate_degree(vars, degree - e, var + 1, current, out);
  }
  current[static_cast<size_t>(var)] = 0;
}

std::uint64_t key_of(const std::vector<int>& e, int base) {
  std::uint64_t k = 0;
  for (int x : e) k = k * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(x);
  return k;
}

void check_finite(const std::vector<double>& c, const char* what) {
  for (double x : c) {
    if (!std::isfinite(x)) {
      throw NumericError(std::string("jet: non-finite coefficient in ") + what, -1, true);
    }
  }
}

const std::shared_ptr<const JetSpace>& wider(const std::shared_ptr<const JetSpace>& a,
                                             const std::shared_ptr<const JetSpace>& b) {
  if (a->vars() != b->vars()) {
    throw UsageError("jet: operands expand in different numbers of variables");
  }
  return a->max_order() >= b->max_order() ? a : b;
}

}  // namespace

JetSpace::JetSpace(int vars, int max_order) : vars_(vars), max_order_(max_order) {
  if (vars < 1 || max_order < 0) throw UsageError("jet: need vars >= 1 and order >= 0");
  const double combos = std::pow(static_cast<double>(max_order + 1), vars);
  if (combos > 1.8e19) throw UsageError("jet: space too large");

  std::vector<int> current(static_cast<size_t>(vars), 0);
  offsets_.push_back(0);
  for (int d = 0; d <= max_order; ++d) {
    enumerate_degree(vars, d, 0, current, monomials_);
    offsets_.push_back(monomials_.size());
  }
  const int base = max_order + 1;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  index.reserve(monomials_.size() * 2);
  for (size_t i = 0; i < monomials_.size(); ++i) {
    index.emplace(key_of(monomials_[i], base), static_cast<std::uint32_t>(i));
  }

  std::vector<int> sum(static_cast<size_t>(vars));
  product_offsets_.push_back(0);
  for (int d = 0; d <= max_order; ++d) {
    for (int da = 0; da <= d; ++da) {
      const int db = d - da;
      for (size_t a = offsets_[static_cast<size_t>(da)]; a < offsets_[static_cast<size_t>(da) + 1]; ++a) {
        for (size_t b = offsets_[static_cast<size_t>(db)]; b < offsets_[static_cast<size_t>(db) + 1]; ++b) {
          for (size_t v = 0; v < sum.size(); ++v) sum[v] = monomials_[a][v] + monomials_[b][v];
          products_.push_back(Product{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                                      index.at(key_of(sum, base))});
        }
      }
    }
    product_offsets_.push_back(products_.size());
  }

  derivatives_.resize(static_cast<size_t>(vars));
  derivative_offsets_.resize(static_cast<size_t>(vars));
  for (int v = 0; v < vars; ++v) {
    auto& entries = derivatives_[static_cast<size_t>(v)];
    auto& offs = derivative_offsets_[static_cast<size_t>(v)];
    offs.push_back(0);  // degree 0 has no derivative terms
    offs.push_back(0);
    for (int d = 1; d <= max_order; ++d) {
      for (size_t j = offsets_[static_cast<size_t>(d)]; j < offsets_[static_cast<size_t>(d) + 1]; ++j) {
        const int e = monomials_[j][static_cast<size_t>(v)];
        if (e == 0) continue;
        std::vector<int> lower = monomials_[j];
        lower[static_cast<size_t>(v)] -= 1;
        entries.push_back(Derivative{static_cast<std::uint32_t>(j), index.at(key_of(lower, base)),
                                     static_cast<double>(e)});
      }
      offs.push_back(entries.size());
    }
  }
}

std::shared_ptr<const JetSpace> JetSpace::get(int vars, int max_order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  // Any cached space over the same variables with enough order will do.
  auto it = cache.lower_bound({vars, max_order});
  if (it != cache.end() && it->first.first == vars) return it->second;
  auto space = std::make_shared<const JetSpace>(vars, max_order);
  cache.emplace(std::make_pair(vars, max_order), space);
  return space;
}

std::span<const JetSpace::Product> JetSpace::products(int order) const {
  return {products_.data(), product_offsets_[static_cast<size_t>(order) + 1]};
}

std::span<const JetSpace::Derivative> JetSpace::derivative(int var, int order) const {
  const auto& offs = derivative_offsets_[static_cast<size_t>(var)];
  return {derivatives_[static_cast<size_t>(var)].data(), offs[static_cast<size_t>(order) + 1]};
}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, int order, double c) {
  if (order > space->max_order()) throw UsageError("jet: order exceeds space");
  std::vector<double> coeffs(space->size(order), 0.0);
  coeffs[0] = c;
  return Jet(std::move(space), order, std::move(coeffs));
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int order, int var, double value) {
  if (var < 0 || var >= space->vars()) throw UsageError("jet: variable index out of range");
  Jet j = constant(std::move(space), order, value);
  if (order >= 1) j.coeffs_[static_cast<size_t>(1 + var)] = 1.0;
  return j;
}

Jet Jet::derivative(int var) const {
  if (!space_) return Jet(0.0);
  if (order_ == 0) throw UsageError("jet: cannot differentiate an order-0 jet");
  std::vector<double> out(space_->size(order_ - 1), 0.0);
  for (const auto& d : space_->derivative(var, order_)) {
    out[d.target] += d.factor * coeffs_[d.source];
  }
  return Jet(space_, order_ - 1, std::move(out));
}

Jet Jet::truncated(int order) const {
  if (!space_ || order >= order_) return *this;
  std::vector<double> c(coeffs_.begin(),
                        coeffs_.begin() + static_cast<std::ptrdiff_t>(space_->size(order)));
  return Jet(space_, order, std::move(c));
}

double Jet::partial(std::span<const int> exponents) const {
  if (!space_) {
    for (int e : exponents) {
      if (e != 0) return 0.0;
    }
    return coeffs_[0];
  }
  int degree = 0;
  double factorial = 1.0;
  for (int e : exponents) {
    degree += e;
    for (int k = 2; k <= e; ++k) factorial *= k;
  }
  if (degree > order_) throw UsageError("jet: partial beyond stored order");
  const size_t first = degree == 0 ? 0 : space_->size(degree - 1);
  for (size_t i = first; i < space_->size(degree); ++i) {
    const auto& m = space_->exponents(i);
    if (std::equal(m.begin(), m.end(), exponents.begin(), exponents.end())) {
      return coeffs_[i] * factorial;
    }
  }
  throw UsageError("jet: exponent vector has wrong length");
}

Jet& Jet::operator+=(const Jet& o) { return *this = *this + o; }
Jet& Jet::operator-=(const Jet& o) { return *this = *this - o; }
Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet operator+(const Jet& a, const Jet& b) {
  if (a.is_scalar() && b.is_scalar()) return Jet(a.value() + b.value());
  if (a.is_scalar() || b.is_scalar()) {
    Jet r = a.is_scalar() ? b : a;
    r.coeffs_[0] += a.is_scalar() ? a.value() : b.value();
    if (!std::isfinite(r.coeffs_[0])) throw NumericError("jet: non-finite sum", -1, true);
    return r;
  }
  const auto& space = wider(a.space_, b.space_);
  const int order = std::min(a.order_, b.order_);
  std::vector<double> c(space->size(order));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
  check_finite(c, "sum");
  return Jet(space, order, std::move(c));
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (double& x : r.coeffs_) x = -x;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

Jet operator*(const Jet& a, const Jet& b) {
  if (a.is_scalar() && b.is_scalar()) return Jet(a.value() * b.value());
  if (a.is_scalar() || b.is_scalar()) {
    const double s = a.is_scalar() ? a.value() : b.value();
    Jet r = a.is_scalar() ? b : a;
    for (double& x : r.coeffs_) x *= s;
    check_finite(r.coeffs_, "scaled product");
    return r;
  }
  const auto& space = wider(a.space_, b.space_);
  const int order = std::min(a.order_, b.order_);
  std::vector<double> c(space->size(order), 0.0);
  const double* x = a.coeffs_.data();
  const double* y = b.coeffs_.data();
  for (const auto& p : space->products(order)) c[p.out] += x[p.lhs] * y[p.rhs];
  check_finite(c, "product");
  return Jet(space, order, std::move(c));
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.is_scalar()) {
    if (b.value() == 0.0) throw NumericError("jet: division by zero", -1, true);
    return a * Jet(1.0 / b.value());
  }
  return a * recip(b);
}

Jet Jet::compose(const Jet& a, std::span<const double> taylor) {
  if (a.is_scalar()) return Jet(taylor[0]);
  const int k = a.order_;
  if (taylor.size() < static_cast<size_t>(k) + 1) throw UsageError("jet: series too short");
  Jet centred = a;
  centred.coeffs_[0] = 0.0;
  Jet result = Jet::constant(a.space_, k, taylor[static_cast<size_t>(k)]);
  for (int i = k - 1; i >= 0; --i) {
    result = result * centred;
    result.coeffs_[0] += taylor[static_cast<size_t>(i)];
  }
  check_finite(result.coeffs_, "series");
  return result;
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  std::vector<double> t(static_cast<size_t>(a.order()) + 1);
  double f = 1.0;
  for (size_t k = 0; k < t.size(); ++k) {
    if (k > 0) f *= static_cast<double>(k);
    t[k] = e / f;
  }
  return Jet::compose(a, t);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw NumericError("jet: log of non-positive value", -1, false);
  std::vector<double> t(static_cast<size_t>(a.order()) + 1);
  t[0] = std::log(x);
  double p = 1.0;
  for (size_t k = 1; k < t.size(); ++k) {
    p *= x;
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(k) * p);
  }
  return Jet::compose(a, t);
}

Jet recip(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw NumericError("jet: reciprocal of zero", -1, true);
  std::vector<double> t(static_cast<size_t>(a.order()) + 1);
  double p = 1.0 / x;
  for (size_t k = 0; k < t.size(); ++k) {
    t[k] = ((k % 2 == 0) ? 1.0 : -1.0) * p;
    p /= x;
  }
  return Jet::compose(a, t);
}

Jet sigmoid(const Jet& a) {
  if (a.value() >= 0.0) return recip(exp(-a) + Jet(1.0));
  const Jet e = exp(a);
  return e * recip(e + Jet(1.0));
}

Jet tanh(const Jet& a) { return sigmoid(a * Jet(2.0)) * Jet(2.0) - Jet(1.0); }

Jet relu(const Jet& a) {
  if (a.value() > 0.0) return a;
  return a * Jet(0.0);
}

std::vector<Jet> identity_jets(std::span<const double> point, int order) {
  auto space = JetSpace::get(static_cast<int>(point.size()), order);
  std::vector<Jet> out;
  out.reserve(point.size());
  for (size_t i = 0; i < point.size(); ++i) {
    out.push_back(Jet::variable(space, order, static_cast<int>(i), point[i]));
  }
  return out;
}

}  // namespace cola::ad
