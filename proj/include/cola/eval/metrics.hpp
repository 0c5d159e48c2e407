#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cola/parallel/exec.hpp"
#include "cola/shapers/update_field.hpp"

namespace cola::eval {

struct EvalReport {
  std::string game;
  double alpha = 0.0;
  std::string field;
  int n_samples = 0;
  // Mean and population std of |C1|^2 + |C2|^2 over samples whose evaluation
  // stayed finite; mean is +inf when any sample diverged.
  double mean_sq = 0.0;
  double std_sq = 0.0;
  double mean_sq_finite = 0.0;
  int n_diverged = 0;
  std::uint64_t seed = 0;
};

EvalReport measure_consistency(const shapers::UpdateField& f, double alpha, int n,
                               std::uint64_t seed,
                               parallel::Exec exec = parallel::Exec::kSerial);

struct CosineReport {
  double mean = 0.0;
  double std = 0.0;  // population std over used samples
  int n_used = 0;
  int n_skipped = 0;  // either update had norm < 1e-12
};

// Per-sample cosine between the concatenated updates of a and b, then
// mean/std. Samples are drawn from a's game region.
CosineReport cosine_similarity(const shapers::UpdateField& a, const shapers::UpdateField& b, int n,
                               std::uint64_t seed,
                               parallel::Exec exec = parallel::Exec::kSerial);

// Per-sample kernels behind the two reports (exposed for benchmarking).
std::vector<double> consistency_per_sample(const shapers::UpdateField& f, double alpha,
                                           const std::vector<Vector>& samples,
                                           parallel::Exec exec);
// NaN marks a skipped sample.
std::vector<double> cosine_per_sample(const shapers::UpdateField& a, const shapers::UpdateField& b,
                                      const std::vector<Vector>& samples, parallel::Exec exec);

struct TrajectoryPoint {
  long step;
  Vector theta;
  double loss1;  // per-step losses (Game::report_scale applied)
  double loss2;
};

struct Trajectory {
  std::string rule;
  double init_sigma = 0.0;
  std::vector<TrajectoryPoint> points;
  bool diverged = false;
  long diverged_step = -1;
};

inline constexpr double kDivergenceNorm = 1e8;

// theta_{t+1} = theta_t + field(theta_t) from theta_0 ~ N(0, sigma^2). Stops
// and flags divergence once |theta| > 1e8 or the field overflows.
Trajectory run_learning(const shapers::UpdateField& f, long steps, double init_sigma,
                        std::uint64_t seed);
Trajectory run_learning_from(const shapers::UpdateField& f, long steps, Vector theta0);

// Unbiased sample variance of player 1's loss over the last `window` points
// (whole trajectory when window is empty).
double loss_variance(const Trajectory& t, std::optional<std::size_t> window = std::nullopt);

struct FieldGrid {
  std::vector<double> xs;  // axis values, player 1
  std::vector<double> ys;  // axis values, player 2
  // Row-major over (ix, iy): node k = ix * ys.size() + iy.
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> dx;
  std::vector<double> dy;
  std::size_t size() const { return x.size(); }
};

FieldGrid export_field(const shapers::UpdateField& f, int resolution);

}  // namespace cola::eval
