#include "cola/learn/consistency.hpp"

#include <cmath>

namespace cola::learn {

double Residuals::squared() const {
  double s = 0.0;
  for (double x : c1) s += x * x;
  for (double x : c2) s += x * x;
  return s;
}

Residuals consistency_residuals(const shapers::UpdateField& f, double alpha,
                                std::span<const double> theta) {
  using ad::Jet;
  const auto& g = f.game();
  const int d1 = g.d1;
  const int m = g.dim();
  const auto fj = f.expand(theta, 1);
  const auto x = ad::identity_jets(theta, 1);
  auto shift2 = x;
  auto shift1 = x;
  for (int j = 0; j < m; ++j) {
    const auto k = static_cast<size_t>(j);
    if (j >= d1) shift2[k] += fj[k];
    else shift1[k] += fj[k];
  }
  const Jet l1 = games::eval_losses(g, std::span<const Jet>(shift2))[0];
  const Jet l2 = games::eval_losses(g, std::span<const Jet>(shift1))[1];
  Residuals r;
  for (int i = 0; i < m; ++i) {
    const double c = fj[static_cast<size_t>(i)].value() + alpha * (i < d1 ? l1 : l2).derivative(i).value();
    if (!std::isfinite(c)) throw NumericError("consistency: non-finite residual", i, true);
    (i < d1 ? r.c1 : r.c2).push_back(c);
  }
  return r;
}

double consistency_loss(const shapers::UpdateField& f, double alpha,
                        const std::vector<Vector>& batch, parallel::Exec exec) {
  if (batch.empty()) throw UsageError("consistency_loss: empty batch");
  std::vector<double> per(batch.size());
  parallel::for_each_index(batch.size(), exec, [&](std::size_t i) {
    per[i] = consistency_residuals(f, alpha, batch[i]).squared();
  });
  return parallel::pairwise_sum(per) / static_cast<double>(batch.size());
}

ad::Var consistency_on_tape(const games::Game& g, const MlpPair& net,
                            std::span<const ad::Var> phi1, std::span<const ad::Var> phi2,
                            double alpha, std::span<const double> theta) {
  using ad::Var;
  const int d1 = g.d1;
  const int m = g.dim();
  if (static_cast<int>(theta.size()) != m) throw UsageError("consistency: wrong parameter count");
  std::vector<Var> x;
  x.reserve(theta.size());
  for (double t : theta) x.push_back(Var::leaf(t));
  const auto f1 = net.f1.forward<Var, Var>(phi1, x);
  const auto f2 = net.f2.forward<Var, Var>(phi2, x);
  auto shift2 = x;
  auto shift1 = x;
  for (int j = 0; j < m; ++j) {
    const auto k = static_cast<size_t>(j);
    if (j >= d1) shift2[k] = x[k] + f2[k - static_cast<size_t>(d1)];
    else shift1[k] = x[k] + f1[k];
  }
  const Var l1 = games::eval_losses(g, std::span<const Var>(shift2))[0];
  const Var l2 = games::eval_losses(g, std::span<const Var>(shift1))[1];
  const auto g1 = ad::gradient(l1, std::span<const Var>(x).subspan(0, static_cast<size_t>(d1)));
  const auto g2 = ad::gradient(l2, std::span<const Var>(x).subspan(static_cast<size_t>(d1)));
  Var total(0.0);
  for (int i = 0; i < d1; ++i) {
    const Var c = f1[static_cast<size_t>(i)] + Var(alpha) * g1[static_cast<size_t>(i)];
    total = total + c * c;
  }
  for (int j = 0; j < m - d1; ++j) {
    const Var c = f2[static_cast<size_t>(j)] + Var(alpha) * g2[static_cast<size_t>(j)];
    total = total + c * c;
  }
  return total;
}

LossGrad sample_loss_grad(const games::Game& g, const MlpPair& net, double alpha,
                          std::span<const double> theta) {
  thread_local ad::Tape tape(1 << 16);
  ad::TapeScope scope(tape);
  std::vector<ad::Var> phi;
  phi.reserve(net.num_params());
  for (double w : net.f1.params()) phi.push_back(ad::Var::leaf(w));
  for (double w : net.f2.params()) phi.push_back(ad::Var::leaf(w));
  const std::span<const ad::Var> all(phi);
  const auto n1 = net.f1.num_params();
  const ad::Var loss = consistency_on_tape(g, net, all.subspan(0, n1), all.subspan(n1), alpha, theta);
  return {loss.value(), ad::gradient_values(loss, all)};
}

LossGrad batch_loss_grad(const games::Game& g, const MlpPair& net, double alpha,
                         const std::vector<Vector>& batch, parallel::Exec exec) {
  if (batch.empty()) throw UsageError("batch_loss_grad: empty batch");
  std::vector<double> losses(batch.size());
  std::vector<std::vector<double>> grads(batch.size());
  parallel::for_each_index(batch.size(), exec, [&](std::size_t i) {
    auto r = sample_loss_grad(g, net, alpha, batch[i]);
    losses[i] = r.loss;
    grads[i] = std::move(r.grad);
  });
  const double inv = 1.0 / static_cast<double>(batch.size());
  LossGrad out{parallel::pairwise_sum(losses) * inv, parallel::pairwise_sum_rows(grads)};
  for (double& v : out.grad) v *= inv;
  return out;
}

}  // namespace cola::learn
