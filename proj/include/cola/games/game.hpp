#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cola/autodiff/scalar.hpp"
#include "cola/errors.hpp"
#include "cola/linalg.hpp"
#include "cola/types.hpp"

namespace cola::games {

enum class GameKind {
  kTandem,
  kHamiltonian,
  kBalduzzi,
  kMatchingPennies,
  kUltimatum,
  kIpd,
  kChicken,
};

struct Game {
  GameKind kind;
  std::string name;
  int d1 = 1;
  int d2 = 1;
  // Sampling box, the same interval on every coordinate.
  double region_lo = -1.0;
  double region_hi = 1.0;
  double init_sigma = 1.0;
  double gamma = 0.96;  // IPD discount only

  int dim() const { return d1 + d2; }
  // Factor turning eval_losses into per-step losses for reporting. The IPD
  // is played on total discounted losses (what the update rules see) and
  // reported per step, i.e. scaled by (1 - gamma).
  double report_scale() const { return kind == GameKind::kIpd ? 1.0 - gamma : 1.0; }
  bool polynomial() const {
    return kind == GameKind::kTandem || kind == GameKind::kHamiltonian ||
           kind == GameKind::kBalduzzi;
  }
};

// tandem | hamiltonian | balduzzi | mp | ultimatum | ipd | chicken
Game game_by_name(std::string_view name);
const std::vector<std::string>& game_names();

std::vector<JointParams> sample_region(const Game& game, int n, std::uint64_t seed);
// Same samples as flat vectors (theta1 then theta2).
std::vector<Vector> sample_region_flat(const Game& game, int n, std::uint64_t seed);

namespace detail {

// Per-state losses (negated payoffs) with states in player 1's view
// (own action first): CC, CD, DC, DD.
inline constexpr std::array<double, 4> kIpdLoss1 = {1.0, 3.0, 0.0, 2.0};
inline constexpr std::array<double, 4> kIpdLoss2 = {1.0, 0.0, 3.0, 2.0};
// Player 2 reads each state from its own side, so CD and DC trade places.
inline constexpr std::array<int, 4> kIpdOpponentView = {0, 2, 1, 3};

}  // namespace detail

// Exact normalized discounted IPD losses. Each policy holds five log-odds of
// cooperating: first move, then after CC, CD, DC, DD seen from that player's
// own side (own action first).
template <class S>
std::array<S, 2> ipd_losses(std::span<const S> p1, std::span<const S> p2, double gamma) {
  using ad::sigmoid;
  if (p1.size() != 5 || p2.size() != 5) throw UsageError("ipd: policies need 5 entries");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw UsageError("ipd: gamma must lie in [0, 1)");
  const S one(1.0);
  auto joint = [&](const S& a, const S& b) {
    return std::array<S, 4>{a * b, a * (one - b), (one - a) * b, (one - a) * (one - b)};
  };
  const auto p0 = joint(sigmoid(p1[0]), sigmoid(p2[0]));
  // (I - gamma P)^T x = p0, then value = (1 - gamma) x . r
  DenseMatrix<S> a(4, 4);
  for (int s = 0; s < 4; ++s) {
    const auto row = joint(sigmoid(p1[static_cast<size_t>(1 + s)]),
                           sigmoid(p2[static_cast<size_t>(1 + detail::kIpdOpponentView[s])]));
    for (int t = 0; t < 4; ++t) {
      const S entry = S(s == t ? 1.0 : 0.0) - S(gamma) * row[static_cast<size_t>(t)];
      a(static_cast<size_t>(t), static_cast<size_t>(s)) = entry;
    }
  }
  const auto x = solve_linear(a, std::vector<S>(p0.begin(), p0.end()));
  S l1(0.0);
  S l2(0.0);
  for (size_t s = 0; s < 4; ++s) {
    l1 = l1 + x[s] * S(detail::kIpdLoss1[s]);
    l2 = l2 + x[s] * S(detail::kIpdLoss2[s]);
  }
  return {l1 * S(1.0 - gamma), l2 * S(1.0 - gamma)};
}

template <class S>
std::array<S, 2> matching_pennies_losses(const S& x, const S& y) {
  using ad::sigmoid;
  const S l1 = -((S(2.0) * sigmoid(x) - S(1.0)) * (S(2.0) * sigmoid(y) - S(1.0)));
  return {l1, -l1};
}

// sigmoid(theta_i) is the probability that player i swerves.
template <class S>
std::array<S, 2> chicken_losses(const S& x, const S& y) {
  using ad::sigmoid;
  const S s1 = sigmoid(x);
  const S s2 = sigmoid(y);
  const S one(1.0);
  const S crash = (one - s1) * (one - s2) * S(100.0);
  const S l1 = s1 * (one - s2) - (one - s1) * s2 + crash;
  const S l2 = (one - s1) * s2 - s1 * (one - s2) + crash;
  return {l1, l2};
}

template <class S>
std::array<S, 2> ultimatum_losses(const S& x, const S& y) {
  using ad::sigmoid;
  const S fair = sigmoid(x);
  const S accept = sigmoid(y);
  const S unfair = (S(1.0) - fair) * accept;
  return {-(S(5.0) * fair + S(8.0) * unfair), -(S(5.0) * fair + S(2.0) * unfair)};
}

// (L1, L2) at theta = theta1 ++ theta2. S is double, ad::Var or ad::Jet.
// For the IPD these are total discounted losses; see Game::report_scale.
template <class S>
std::array<S, 2> eval_losses(const Game& g, std::span<const S> theta) {
  if (static_cast<int>(theta.size()) != g.dim()) {
    throw UsageError("game " + g.name + ": expected " + std::to_string(g.dim()) +
                     " parameters, got " + std::to_string(theta.size()));
  }
  switch (g.kind) {
    case GameKind::kTandem: {
      const S s = theta[0] + theta[1];
      const S sq = s * s;
      return {sq - S(2.0) * theta[0], sq - S(2.0) * theta[1]};
    }
    case GameKind::kHamiltonian: {
      const S xy = theta[0] * theta[1];
      return {xy, -xy};
    }
    case GameKind::kBalduzzi: {
      const S xy = S(10.0) * theta[0] * theta[1];
      return {S(0.5) * theta[0] * theta[0] + xy, S(0.5) * theta[1] * theta[1] - xy};
    }
    case GameKind::kMatchingPennies:
      return matching_pennies_losses(theta[0], theta[1]);
    case GameKind::kUltimatum:
      return ultimatum_losses(theta[0], theta[1]);
    case GameKind::kChicken:
      return chicken_losses(theta[0], theta[1]);
    case GameKind::kIpd: {
      const auto l = ipd_losses(theta.subspan(0, 5), theta.subspan(5, 5), g.gamma);
      const S total(1.0 / (1.0 - g.gamma));
      return {l[0] * total, l[1] * total};
    }
  }
  throw UsageError("unknown game kind");
}

template <class S>
std::array<S, 2> eval_losses(const Game& g, const std::vector<S>& theta) {
  return eval_losses(g, std::span<const S>(theta));
}

inline std::array<double, 2> eval_losses(const Game& g, const JointParams& p) {
  if (static_cast<int>(p.theta1.size()) != g.d1 || static_cast<int>(p.theta2.size()) != g.d2) {
    throw UsageError("game " + g.name + ": parameter blocks do not match (d1, d2)");
  }
  return eval_losses(g, p.flat());
}

}  // namespace cola::games
