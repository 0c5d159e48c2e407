#include "cola/shapers/update_field.hpp"

#include <cmath>

namespace cola::shapers {

void UpdateField::check_point(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != game_.dim()) {
    throw UsageError(name() + ": expected " + std::to_string(game_.dim()) + " parameters, got " +
                     std::to_string(theta.size()));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i])) throw NumericError(name() + ": non-finite parameter", static_cast<int>(i));
  }
}

Vector UpdateField::operator()(std::span<const double> theta) const {
  const auto jets = expand(theta, 0);
  Vector out(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) out[i] = jets[i].value();
  return out;
}

JointParams UpdateField::update(const JointParams& p) const {
  if (static_cast<int>(p.theta1.size()) != game_.d1 || static_cast<int>(p.theta2.size()) != game_.d2) {
    throw UsageError(name() + ": parameter blocks do not match the game");
  }
  return JointParams::split((*this)(p.flat()), p.theta1.size());
}

LossJets loss_jets(const games::Game& g, std::span<const double> theta, int order) {
  LossJets out;
  out.x = ad::identity_jets(theta, order);
  const auto l = games::eval_losses(g, std::span<const ad::Jet>(out.x));
  out.l1 = l[0];
  out.l2 = l[1];
  return out;
}

}  // namespace cola::shapers
