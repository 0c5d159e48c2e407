#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cola/autodiff/jet.hpp"
#include "cola/games/game.hpp"
#include "cola/types.hpp"

namespace cola::shapers {

// A map theta -> (dtheta1, dtheta2) that can be expanded to any Taylor order
// around a point. Order 0 is the plain update; order 1 carries the Jacobian,
// which is what the consistency residual differentiates through.
class UpdateField {
 public:
  explicit UpdateField(games::Game game) : game_(std::move(game)) {}
  virtual ~UpdateField() = default;

  const games::Game& game() const { return game_; }
  virtual std::string name() const = 0;

  // One jet per output coordinate (theta1 block then theta2 block), each in
  // the variables theta[0..dim) around `theta`, truncated at `order`.
  virtual std::vector<ad::Jet> expand(std::span<const double> theta, int order) const = 0;

  Vector operator()(std::span<const double> theta) const;
  JointParams update(const JointParams& p) const;

 protected:
  void check_point(std::span<const double> theta) const;

 private:
  games::Game game_;
};

using FieldPtr = std::shared_ptr<const UpdateField>;

// Identity jets around theta plus the game losses evaluated on them.
struct LossJets {
  std::vector<ad::Jet> x;
  ad::Jet l1;
  ad::Jet l2;
};
LossJets loss_jets(const games::Game& g, std::span<const double> theta, int order);

}  // namespace cola::shapers
