#include "cola/autodiff/var.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cola/errors.hpp"

namespace cola::ad {
namespace {

thread_local Tape* g_active = nullptr;

const char* op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kCopy: return "copy";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kDiv: return "div";
    case Op::kNeg: return "neg";
    case Op::kAddConst: return "add_const";
    case Op::kMulConst: return "mul_const";
    case Op::kRecip: return "recip";
    case Op::kExp: return "exp";
    case Op::kLog: return "log";
    case Op::kSigmoid: return "sigmoid";
    case Op::kTanh: return "tanh";
    case Op::kRelu: return "relu";
  }
  return "?";
}

Tape& require_tape() {
  if (g_active == nullptr) {
    throw UsageError("autodiff: no tape is active on this thread");
  }
  return *g_active;
}

Var make(Op op, double value, std::int32_t lhs, std::int32_t rhs = -1,
         double constant = 0.0) {
  return Var::from_node(value, require_tape().push(op, value, lhs, rhs, constant));
}

double sigmoid_value(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

std::int32_t Tape::push(Op op, double value, std::int32_t lhs, std::int32_t rhs,
                        double constant) {
  if (!std::isfinite(value)) {
    throw NumericError(std::string("autodiff: non-finite value produced by ") +
                           op_name(op),
                       -1, true);
  }
  nodes_.push_back(Node{value, constant, lhs, rhs, op});
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

Tape* Tape::active() { return g_active; }

TapeScope::TapeScope() : tape_(&own_), previous_(g_active) { g_active = tape_; }
TapeScope::TapeScope(Tape& reuse) : own_(0), tape_(&reuse), previous_(g_active) {
  reuse.clear();
  g_active = tape_;
}
TapeScope::~TapeScope() { g_active = previous_; }

Var Var::leaf(double value) { return make(Op::kLeaf, value, -1); }

Var& Var::operator+=(const Var& o) { return *this = *this + o; }
Var& Var::operator-=(const Var& o) { return *this = *this - o; }
Var& Var::operator*=(const Var& o) { return *this = *this * o; }
Var& Var::operator/=(const Var& o) { return *this = *this / o; }

Var operator+(const Var& a, const Var& b) {
  if (a.is_constant() && b.is_constant()) return Var(a.value() + b.value());
  if (a.is_constant()) {
    if (a.value() == 0.0) return b;
    return make(Op::kAddConst, b.value() + a.value(), b.index(), -1, a.value());
  }
  if (b.is_constant()) {
    if (b.value() == 0.0) return a;
    return make(Op::kAddConst, a.value() + b.value(), a.index(), -1, b.value());
  }
  return make(Op::kAdd, a.value() + b.value(), a.index(), b.index());
}

Var operator-(const Var& a) {
  if (a.is_constant()) return Var(-a.value());
  return make(Op::kNeg, -a.value(), a.index());
}

Var operator-(const Var& a, const Var& b) {
  if (a.is_constant() && b.is_constant()) return Var(a.value() - b.value());
  if (b.is_constant()) {
    if (b.value() == 0.0) return a;
    return make(Op::kAddConst, a.value() - b.value(), a.index(), -1, -b.value());
  }
  if (a.is_constant()) {
    if (a.value() == 0.0) return -b;
    return -b + a;
  }
  return make(Op::kSub, a.value() - b.value(), a.index(), b.index());
}

Var operator*(const Var& a, const Var& b) {
  if (a.is_constant() && b.is_constant()) return Var(a.value() * b.value());
  if (a.is_constant() || b.is_constant()) {
    const Var& c = a.is_constant() ? a : b;
    const Var& x = a.is_constant() ? b : a;
    if (c.value() == 0.0) return Var(0.0);
    if (c.value() == 1.0) return x;
    if (c.value() == -1.0) return -x;
    return make(Op::kMulConst, x.value() * c.value(), x.index(), -1, c.value());
  }
  return make(Op::kMul, a.value() * b.value(), a.index(), b.index());
}

Var operator/(const Var& a, const Var& b) {
  if (b.is_constant()) {
    if (b.value() == 0.0) throw NumericError("autodiff: division by zero", -1, true);
    return a * Var(1.0 / b.value());
  }
  if (a.is_constant()) {
    if (a.value() == 0.0) return Var(0.0);
    return recip(b) * a;
  }
  return make(Op::kDiv, a.value() / b.value(), a.index(), b.index());
}

Var recip(const Var& a) {
  if (a.is_constant()) return Var(1.0 / a.value());
  return make(Op::kRecip, 1.0 / a.value(), a.index());
}

Var exp(const Var& a) {
  if (a.is_constant()) return Var(std::exp(a.value()));
  return make(Op::kExp, std::exp(a.value()), a.index());
}

Var log(const Var& a) {
  if (a.is_constant()) return Var(std::log(a.value()));
  return make(Op::kLog, std::log(a.value()), a.index());
}

Var tanh(const Var& a) {
  if (a.is_constant()) return Var(std::tanh(a.value()));
  return make(Op::kTanh, std::tanh(a.value()), a.index());
}

Var sigmoid(const Var& a) {
  if (a.is_constant()) return Var(sigmoid_value(a.value()));
  return make(Op::kSigmoid, sigmoid_value(a.value()), a.index());
}

Var relu(const Var& a) {
  if (a.is_constant()) return Var(std::max(a.value(), 0.0));
  if (a.value() <= 0.0) return Var(0.0);
  return make(Op::kRelu, a.value(), a.index());
}

Var fresh(const Var& a) {
  if (a.is_constant()) return Var::leaf(a.value());
  return make(Op::kCopy, a.value(), a.index());
}

std::vector<Var> fresh(std::span<const Var> a) {
  std::vector<Var> out;
  out.reserve(a.size());
  for (const Var& v : a) out.push_back(fresh(v));
  return out;
}

namespace {

// Nodes in [lo, hi] that depend on at least one input, and input flags.
struct Sweep {
  std::int32_t lo = 0;
  std::int32_t hi = -1;
  std::vector<std::uint8_t> reach;
  std::vector<std::uint8_t> input;

  bool reaches(std::int32_t i) const {
    return i >= lo && reach[static_cast<size_t>(i - lo)] != 0;
  }
};

bool prepare_sweep(const Var& y, std::span<const Var> wrt, Sweep& s) {
  if (y.is_constant()) return false;
  std::int32_t lo = y.index() + 1;
  for (const Var& w : wrt) {
    if (!w.is_constant()) lo = std::min(lo, w.index());
  }
  if (lo > y.index()) return false;
  const Tape& tape = require_tape();
  s.lo = lo;
  s.hi = y.index();
  const size_t n = static_cast<size_t>(s.hi - s.lo + 1);
  s.reach.assign(n, 0);
  s.input.assign(n, 0);
  for (const Var& w : wrt) {
    if (!w.is_constant() && w.index() <= s.hi) {
      s.input[static_cast<size_t>(w.index() - lo)] = 1;
      s.reach[static_cast<size_t>(w.index() - lo)] = 1;
    }
  }
  for (std::int32_t i = lo; i <= s.hi; ++i) {
    auto k = static_cast<size_t>(i - lo);
    if (s.input[k]) continue;
    const Node& nd = tape.node(i);
    if ((nd.lhs >= lo && s.reach[static_cast<size_t>(nd.lhs - lo)]) ||
        (nd.rhs >= lo && s.reach[static_cast<size_t>(nd.rhs - lo)])) {
      s.reach[k] = 1;
    }
  }
  return s.reach[n - 1] != 0;
}

}  // namespace

std::vector<Var> gradient(const Var& y, std::span<const Var> wrt) {
  std::vector<Var> out(wrt.size(), Var(0.0));
  Sweep s;
  if (!prepare_sweep(y, wrt, s)) return out;
  Tape& tape = require_tape();
  std::vector<Var> adj(s.reach.size(), Var(0.0));
  adj.back() = Var(1.0);

  auto accumulate = [&](std::int32_t target, const Var& contribution) {
    if (!s.reaches(target)) return;
    Var& slot = adj[static_cast<size_t>(target - s.lo)];
    slot = slot + contribution;
  };

  for (std::int32_t i = s.hi; i >= s.lo; --i) {
    const auto k = static_cast<size_t>(i - s.lo);
    if (!s.reach[k] || s.input[k]) continue;
    const Var g = adj[k];
    if (g.is_constant() && g.value() == 0.0) continue;
    // Copy: the tape may reallocate while the adjoint graph is appended.
    const Node nd = tape.node(i);
    const Var self = Var::from_node(nd.value, i);
    auto operand = [&](std::int32_t j) { return Var::from_node(tape.node(j).value, j); };
    switch (nd.op) {
      case Op::kLeaf:
        break;
      case Op::kCopy:
      case Op::kAddConst:
        accumulate(nd.lhs, g);
        break;
      case Op::kAdd:
        accumulate(nd.lhs, g);
        accumulate(nd.rhs, g);
        break;
      case Op::kSub:
        accumulate(nd.lhs, g);
        accumulate(nd.rhs, -g);
        break;
      case Op::kMul:
        if (s.reaches(nd.lhs)) accumulate(nd.lhs, g * operand(nd.rhs));
        if (s.reaches(nd.rhs)) accumulate(nd.rhs, g * operand(nd.lhs));
        break;
      case Op::kDiv: {
        const Var b = operand(nd.rhs);
        if (s.reaches(nd.lhs)) accumulate(nd.lhs, g / b);
        if (s.reaches(nd.rhs)) accumulate(nd.rhs, -(g * self) / b);
        break;
      }
      case Op::kNeg:
        accumulate(nd.lhs, -g);
        break;
      case Op::kMulConst:
        accumulate(nd.lhs, g * Var(nd.constant));
        break;
      case Op::kRecip:
        accumulate(nd.lhs, -(g * self * self));
        break;
      case Op::kExp:
        accumulate(nd.lhs, g * self);
        break;
      case Op::kLog:
        accumulate(nd.lhs, g / operand(nd.lhs));
        break;
      case Op::kSigmoid:
        accumulate(nd.lhs, g * (self * (Var(1.0) - self)));
        break;
      case Op::kTanh:
        accumulate(nd.lhs, g * (Var(1.0) - self * self));
        break;
      case Op::kRelu:
        // Only recorded for positive inputs; the kink has measure zero.
        accumulate(nd.lhs, g);
        break;
    }
  }
  for (size_t k = 0; k < wrt.size(); ++k) {
    const Var& w = wrt[k];
    if (!w.is_constant() && w.index() >= s.lo && w.index() <= s.hi) {
      out[k] = adj[static_cast<size_t>(w.index() - s.lo)];
    }
  }
  return out;
}

std::vector<double> gradient_values(const Var& y, std::span<const Var> wrt) {
  std::vector<double> out(wrt.size(), 0.0);
  Sweep s;
  if (!prepare_sweep(y, wrt, s)) return out;
  const Tape& tape = require_tape();
  std::vector<double> adj(s.reach.size(), 0.0);
  adj.back() = 1.0;
  auto acc = [&](std::int32_t target, double c) {
    if (target >= s.lo) adj[static_cast<size_t>(target - s.lo)] += c;
  };
  for (std::int32_t i = s.hi; i >= s.lo; --i) {
    const auto k = static_cast<size_t>(i - s.lo);
    const double g = adj[k];
    if (g == 0.0 || !s.reach[k] || s.input[k]) continue;
    const Node& nd = tape.node(i);
    switch (nd.op) {
      case Op::kLeaf:
        break;
      case Op::kCopy:
      case Op::kAddConst:
      case Op::kRelu:
        acc(nd.lhs, g);
        break;
      case Op::kAdd:
        acc(nd.lhs, g);
        acc(nd.rhs, g);
        break;
      case Op::kSub:
        acc(nd.lhs, g);
        acc(nd.rhs, -g);
        break;
      case Op::kMul:
        acc(nd.lhs, g * tape.node(nd.rhs).value);
        acc(nd.rhs, g * tape.node(nd.lhs).value);
        break;
      case Op::kDiv: {
        const double b = tape.node(nd.rhs).value;
        acc(nd.lhs, g / b);
        acc(nd.rhs, -g * nd.value / b);
        break;
      }
      case Op::kNeg:
        acc(nd.lhs, -g);
        break;
      case Op::kMulConst:
        acc(nd.lhs, g * nd.constant);
        break;
      case Op::kRecip:
        acc(nd.lhs, -g * nd.value * nd.value);
        break;
      case Op::kExp:
        acc(nd.lhs, g * nd.value);
        break;
      case Op::kLog:
        acc(nd.lhs, g / tape.node(nd.lhs).value);
        break;
      case Op::kSigmoid:
        acc(nd.lhs, g * nd.value * (1.0 - nd.value));
        break;
      case Op::kTanh:
        acc(nd.lhs, g * (1.0 - nd.value * nd.value));
        break;
    }
  }
  for (size_t k = 0; k < wrt.size(); ++k) {
    const Var& w = wrt[k];
    if (!w.is_constant() && w.index() >= s.lo && w.index() <= s.hi) {
      out[k] = adj[static_cast<size_t>(w.index() - s.lo)];
    }
  }
  return out;
}

}  // namespace cola::ad
