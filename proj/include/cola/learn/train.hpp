#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cola/games/game.hpp"
#include "cola/learn/mlp.hpp"
#include "cola/parallel/exec.hpp"

namespace cola::learn {

struct ColaConfig {
  games::Game game = games::game_by_name("tandem");
  double alpha = 1.0;
  std::optional<double> region_lo;  // override the game's sampling box
  std::optional<double> region_hi;
  std::optional<Architecture> architecture;  // default: Architecture::for_game
  int batch = 0;     // 0: 8 for polynomial games, 64 otherwise
  long steps = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr_decay = 0.9;
  long decay_interval = 0;  // 0: 5000 for polynomial games, 10000 otherwise
  std::uint64_t seed = 0;
  long log_interval = 100;
  parallel::Exec exec = parallel::Exec::kSerial;

  // Fills batch, architecture and region defaults from the game; validates.
  ColaConfig resolved() const;
  games::Game sampling_game() const;
};

struct TracePoint {
  long step;
  double mean_loss;  // mean batch consistency loss since the previous point
};

struct TrainingTrace {
  std::vector<TracePoint> points;
  ColaConfig config;
  double seconds = 0.0;
};

struct TrainResult {
  MlpPair net;
  TrainingTrace trace;
};

// Adam on the batch-mean consistency loss; the step size is multiplied by
// lr_decay every decay_interval steps. steps == 0 returns the initialized
// networks and a single trace point with the initial loss.
TrainResult train_cola(const ColaConfig& config);

// Step budget used by the CLI and the acceptance runs when none is given.
long default_steps(const games::Game& g);

class Adam {
 public:
  Adam(std::size_t n, double beta1, double beta2, double eps);
  void step(std::vector<double>& params, const std::vector<double>& grad, double lr);

 private:
  double beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace cola::learn
