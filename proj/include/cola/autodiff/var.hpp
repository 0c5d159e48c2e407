#pragma once

// Reverse-mode automatic differentiation on a per-thread tape whose backward
// pass is itself recorded, so gradients can be differentiated again to any
// depth.
//
// A Var is either a constant (index < 0, behaves like a double) or a handle
// to a node on the tape that is active on the calling thread. Gradients are
// taken with `gradient`, which appends the adjoint computation to the same
// tape; `gradient_values` runs a plain numeric sweep instead.

#include <cstdint>
#include <span>
#include <vector>

namespace cola::ad {

enum class Op : std::uint8_t {
  kLeaf,
  kCopy,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kAddConst,
  kMulConst,
  kRecip,
  kExp,
  kLog,
  kSigmoid,
  kTanh,
  kRelu,
};

struct Node {
  double value;
  double constant;  // operand of kAddConst / kMulConst
  std::int32_t lhs;
  std::int32_t rhs;
  Op op;
};

class Tape {
 public:
  explicit Tape(std::size_t reserve = 1 << 12) { nodes_.reserve(reserve); }

  std::int32_t push(Op op, double value, std::int32_t lhs = -1,
                    std::int32_t rhs = -1, double constant = 0.0);
  const Node& node(std::int32_t i) const { return nodes_[static_cast<size_t>(i)]; }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  // Tape installed on this thread, or nullptr.
  static Tape* active();

 private:
  friend class TapeScope;
  std::vector<Node> nodes_;
};

// Installs a fresh tape on the current thread for its lifetime and restores
// the previous one afterwards. Vars created inside must not outlive it.
class TapeScope {
 public:
  TapeScope();
  // Clears `reuse` and installs it, keeping its capacity (hot loops).
  explicit TapeScope(Tape& reuse);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

  Tape& tape() { return *tape_; }

 private:
  Tape own_;
  Tape* tape_;
  Tape* previous_;
};

class Var {
 public:
  Var() = default;
  Var(double constant) : value_(constant) {}  // NOLINT: implicit by design of generic code

  double value() const { return value_; }
  bool is_constant() const { return index_ < 0; }
  std::int32_t index() const { return index_; }

  // New independent variable on the active tape.
  static Var leaf(double value);
  static Var from_node(double value, std::int32_t index) {
    Var v(value);
    v.index_ = index;
    return v;
  }

  Var& operator+=(const Var& o);
  Var& operator-=(const Var& o);
  Var& operator*=(const Var& o);
  Var& operator/=(const Var& o);

 private:
  double value_ = 0.0;
  std::int32_t index_ = -1;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

Var exp(const Var& a);
Var log(const Var& a);
Var tanh(const Var& a);
Var sigmoid(const Var& a);
Var relu(const Var& a);
Var recip(const Var& a);

// Same value, new node: differentiating with respect to the copy treats it as
// an independent input while outer derivatives still flow through it.
Var fresh(const Var& a);
std::vector<Var> fresh(std::span<const Var> a);

// d y / d wrt[k], recorded on the tape so the result is differentiable.
// Inputs are terminals: adjoints are not propagated past them.
std::vector<Var> gradient(const Var& y, std::span<const Var> wrt);

// Same quantity as `gradient` without recording anything.
std::vector<double> gradient_values(const Var& y, std::span<const Var> wrt);

inline double value(const Var& v) { return v.value(); }

}  // namespace cola::ad
