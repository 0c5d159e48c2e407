#pragma once

#include <span>
#include <vector>

#include "cola/autodiff/var.hpp"
#include "cola/learn/mlp.hpp"
#include "cola/parallel/exec.hpp"
#include "cola/shapers/update_field.hpp"

namespace cola::learn {

// C1 = f1 + alpha grad_1 [L1(theta1, theta2 + f2)], C2 symmetric; the
// gradient is total, so it flows through f2's dependence on theta1.
struct Residuals {
  Vector c1;
  Vector c2;
  double squared() const;  // |C1|^2 + |C2|^2
};

// Any field, via first-order jets of the field.
Residuals consistency_residuals(const shapers::UpdateField& f, double alpha,
                                std::span<const double> theta);

// Mean over the batch of |C1|^2 + |C2|^2.
double consistency_loss(const shapers::UpdateField& f, double alpha,
                        const std::vector<Vector>& batch,
                        parallel::Exec exec = parallel::Exec::kSerial);

// |C1|^2 + |C2|^2 at theta for networks whose weights are tape variables;
// differentiable in phi (the inner gradient in theta is recorded).
ad::Var consistency_on_tape(const games::Game& g, const MlpPair& net,
                            std::span<const ad::Var> phi1, std::span<const ad::Var> phi2,
                            double alpha, std::span<const double> theta);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d (phi1, phi2)
};

// Single sample: value and weight gradient of |C1|^2 + |C2|^2.
LossGrad sample_loss_grad(const games::Game& g, const MlpPair& net, double alpha,
                          std::span<const double> theta);

// Batch mean of the above, reduced in a fixed order.
LossGrad batch_loss_grad(const games::Game& g, const MlpPair& net, double alpha,
                         const std::vector<Vector>& batch,
                         parallel::Exec exec = parallel::Exec::kSerial);

}  // namespace cola::learn
