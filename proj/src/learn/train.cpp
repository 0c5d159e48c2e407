#include "cola/learn/train.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "cola/learn/consistency.hpp"

namespace cola::learn {

ColaConfig ColaConfig::resolved() const {
  ColaConfig c = *this;
  if (!(c.alpha > 0.0)) throw UsageError("cola: alpha must be > 0");
  if (c.batch == 0) c.batch = c.game.polynomial() ? 8 : 64;
  if (c.batch < 1) throw UsageError("cola: batch must be >= 1");
  if (c.decay_interval == 0) c.decay_interval = c.game.polynomial() ? 5000 : 10000;
  if (c.steps < 0) throw UsageError("cola: steps must be >= 0");
  if (!(c.lr_decay > 0.0 && c.lr_decay <= 1.0)) throw UsageError("cola: lr decay must lie in (0, 1]");
  if (c.decay_interval < 1 || c.log_interval < 1) throw UsageError("cola: intervals must be >= 1");
  if (!c.architecture) c.architecture = Architecture::for_game(c.game);
  return c;
}

games::Game ColaConfig::sampling_game() const {
  games::Game g = game;
  if (region_lo) g.region_lo = *region_lo;
  if (region_hi) g.region_hi = *region_hi;
  if (!(g.region_lo < g.region_hi)) throw UsageError("cola: empty sampling region");
  return g;
}

Adam::Adam(std::size_t n, double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

long default_steps(const games::Game& g) {
  // TODO: revisit the non-polynomial budgets once the tape is faster.
  return g.polynomial() ? 120000 : 5000;
}

TrainResult train_cola(const ColaConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ColaConfig cfg = config.resolved();
  const games::Game sampler = cfg.sampling_game();
  TrainResult result{MlpPair::for_game(cfg.game, *cfg.architecture, cfg.seed), {{}, cfg, 0.0}};
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(sampler.region_lo, sampler.region_hi);
  auto draw = [&] {
    std::vector<Vector> batch(static_cast<size_t>(cfg.batch), Vector(static_cast<size_t>(cfg.game.dim())));
    for (auto& v : batch) {
      for (double& x : v) x = u(rng);
    }
    return batch;
  };

  auto phi = result.net.flat_params();
  Adam adam(phi.size(), cfg.beta1, cfg.beta2, cfg.eps);
  double window = 0.0;
  long in_window = 0;
  for (long step = 0; step <= cfg.steps; ++step) {
    const auto batch = draw();
    LossGrad lg;
    try {
      lg = batch_loss_grad(cfg.game, result.net, cfg.alpha, batch, cfg.exec);
    } catch (const NumericError& e) {
      throw NumericError("cola training step " + std::to_string(step) + ": " + e.what(),
                         e.coordinate(), e.diverged());
    }
    if (!std::isfinite(lg.loss)) {
      throw NumericError("cola training step " + std::to_string(step) + ": loss is not finite", -1, true);
    }
    if (step == 0) {
      result.trace.points.push_back({0, lg.loss});
      if (cfg.steps == 0) break;
    } else {
      window += lg.loss;
      ++in_window;
      if (step % cfg.log_interval == 0 || step == cfg.steps) {
        result.trace.points.push_back({step, window / static_cast<double>(in_window)});
        window = 0.0;
        in_window = 0;
      }
    }
    if (step == cfg.steps) break;
    const double lr = cfg.lr * std::pow(cfg.lr_decay, static_cast<double>(step / cfg.decay_interval));
    adam.step(phi, lg.grad, lr);
    result.net.set_flat_params(phi);
  }
  result.trace.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cola::learn
