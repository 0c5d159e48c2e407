#pragma once

#include <string>
#include <string_view>

#include "cola/linalg.hpp"
#include "cola/shapers/update_field.hpp"

namespace cola::shapers {

enum class RuleKind { kZero, kNaive, kHola, kLookAhead, kCgd, kPlola };
enum class Flavor { kExact, kTaylor };

struct RuleSpec {
  RuleKind kind = RuleKind::kNaive;
  int order = 0;  // HOLA / LookAhead order
  Flavor flavor = Flavor::kExact;
  double p = 1.0;  // p-LOLA mixing weight

  std::string to_string() const;
};

// naive | zero | lola-exact | lola-taylor | hola:{n}:{exact|taylor} |
// lookahead:{n} | lcgd | cgd | plola:{p}
RuleSpec parse_rule(std::string_view text);

FieldPtr make_field(const games::Game& game, double alpha, const RuleSpec& rule);
inline FieldPtr make_field(const games::Game& game, double alpha, std::string_view rule) {
  return make_field(game, alpha, parse_rule(rule));
}

class ZeroField : public UpdateField {
 public:
  using UpdateField::UpdateField;
  std::string name() const override { return "zero"; }
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;
};

// h^k_1 = -alpha grad_1 L1(theta1, theta2 + h^{k-1}_2) (exact) or
// -alpha grad_1 (L1 + grad_2 L1 . h^{k-1}_2) (taylor), seeded with h^{-1} = 0.
// Order 0 is naive learning, order 1 is LOLA.
class HolaField : public UpdateField {
 public:
  HolaField(games::Game game, double alpha, int order, Flavor flavor);
  std::string name() const override;
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;

 private:
  double alpha_;
  int n_;
  Flavor flavor_;
};

// -alpha sum_{i<=n} (-alpha H_o)^i xi.
class LookAheadField : public UpdateField {
 public:
  LookAheadField(games::Game game, double alpha, int order);
  std::string name() const override;
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;

 private:
  double alpha_;
  int n_;
};

// -alpha M^{-1} xi with M = [[I, alpha grad_12 L1], [alpha grad_21 L2, I]].
class CgdField : public UpdateField {
 public:
  CgdField(games::Game game, double alpha);
  std::string name() const override { return "cgd"; }
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;

  static constexpr double kMaxCondition = 1e12;

 private:
  double alpha_;
};

// -alpha (I - alpha H_o) xi + p alpha^2 chi.
class PlolaField : public UpdateField {
 public:
  PlolaField(games::Game game, double alpha, double p);
  std::string name() const override;
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;

 private:
  double alpha_;
  double p_;
};

// Simultaneous gradient, off-diagonal Hessian (full dim x dim, zero diagonal
// blocks) and shaping term chi = (grad_12 L2 grad_2 L1, grad_21 L1 grad_1 L2).
struct GameDerivatives {
  Vector xi;
  Matrix h_off;
  Vector chi;
};
GameDerivatives game_derivatives(const games::Game& g, std::span<const double> theta);

// Plain-value entry points.
Vector naive_update(const games::Game& g, double alpha, std::span<const double> theta);
Vector exact_lola_update(const games::Game& g, double alpha, std::span<const double> theta);
Vector taylor_lola_update(const games::Game& g, double alpha, std::span<const double> theta);
Vector hola_update(const games::Game& g, double alpha, int n, Flavor flavor,
                   std::span<const double> theta);
Vector lookahead_series_update(const games::Game& g, double alpha, int n,
                               std::span<const double> theta);
Vector cgd_update(const games::Game& g, double alpha, std::span<const double> theta);
Vector plola_update(const games::Game& g, double alpha, double p, std::span<const double> theta);

}  // namespace cola::shapers
