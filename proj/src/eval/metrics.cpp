#include "cola/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cola/learn/consistency.hpp"

namespace cola::eval {
namespace {

double norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct MeanStd {
  double mean;
  double std;
};

MeanStd mean_std(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = parallel::pairwise_sum(v) / n;
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - mean) * (v[i] - mean);
  return {mean, std::sqrt(parallel::pairwise_sum(dev) / n)};
}

}  // namespace

std::vector<double> consistency_per_sample(const shapers::UpdateField& f, double alpha,
                                           const std::vector<Vector>& samples,
                                           parallel::Exec exec) {
  std::vector<double> out(samples.size());
  parallel::for_each_index(samples.size(), exec, [&](std::size_t i) {
    try {
      out[i] = learn::consistency_residuals(f, alpha, samples[i]).squared();
    } catch (const NumericError& e) {
      if (!e.diverged()) throw;
      out[i] = std::numeric_limits<double>::infinity();
    }
  });
  return out;
}

EvalReport measure_consistency(const shapers::UpdateField& f, double alpha, int n,
                               std::uint64_t seed, parallel::Exec exec) {
  const auto samples = games::sample_region_flat(f.game(), n, seed);
  const auto per = consistency_per_sample(f, alpha, samples, exec);
  EvalReport r{f.game().name, alpha, f.name(), n, 0.0, 0.0, 0.0, 0, seed};
  std::vector<double> finite;
  for (double v : per) {
    if (std::isfinite(v)) finite.push_back(v);
    else ++r.n_diverged;
  }
  if (!finite.empty()) {
    const auto ms = mean_std(finite);
    r.mean_sq_finite = ms.mean;
    r.std_sq = ms.std;
  }
  r.mean_sq = r.n_diverged > 0 ? std::numeric_limits<double>::infinity() : r.mean_sq_finite;
  return r;
}

std::vector<double> cosine_per_sample(const shapers::UpdateField& a, const shapers::UpdateField& b,
                                      const std::vector<Vector>& samples, parallel::Exec exec) {
  std::vector<double> out(samples.size());
  parallel::for_each_index(samples.size(), exec, [&](std::size_t i) {
    const Vector u = a(samples[i]);
    const Vector v = b(samples[i]);
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu < 1e-12 || nv < 1e-12) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    double dot = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * v[k];
    out[i] = std::clamp(dot / (nu * nv), -1.0, 1.0);
  });
  return out;
}

CosineReport cosine_similarity(const shapers::UpdateField& a, const shapers::UpdateField& b, int n,
                               std::uint64_t seed, parallel::Exec exec) {
  if (a.game().name != b.game().name) throw UsageError("cosine: fields belong to different games");
  const auto samples = games::sample_region_flat(a.game(), n, seed);
  const auto per = cosine_per_sample(a, b, samples, exec);
  std::vector<double> used;
  CosineReport r;
  for (double c : per) {
    if (std::isnan(c)) ++r.n_skipped;
    else used.push_back(c);
  }
  if (used.empty()) throw NumericError("cosine: every sample had a vanishing update");
  const auto ms = mean_std(used);
  r.mean = ms.mean;
  r.std = ms.std;
  r.n_used = static_cast<int>(used.size());
  return r;
}

Trajectory run_learning_from(const shapers::UpdateField& f, long steps, Vector theta) {
  if (steps < 0) throw UsageError("run_learning: steps must be >= 0");
  const auto& g = f.game();
  if (static_cast<int>(theta.size()) != g.dim()) throw UsageError("run_learning: wrong parameter count");
  Trajectory t;
  t.rule = f.name();
  auto record = [&](long step) {
    const auto l = games::eval_losses(g, std::span<const double>(theta));
    t.points.push_back({step, theta, l[0] * g.report_scale(), l[1] * g.report_scale()});
  };
  record(0);
  for (long s = 1; s <= steps; ++s) {
    Vector delta;
    try {
      delta = f(theta);
    } catch (const NumericError& e) {
      if (!e.diverged()) throw;
      t.diverged = true;
      t.diverged_step = s;
      return t;
    }
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += delta[i];
    if (!(norm(theta) <= kDivergenceNorm)) {
      t.diverged = true;
      t.diverged_step = s;
      return t;
    }
    record(s);
  }
  return t;
}

Trajectory run_learning(const shapers::UpdateField& f, long steps, double init_sigma,
                        std::uint64_t seed) {
  if (!(init_sigma >= 0.0)) throw UsageError("run_learning: init sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector theta(static_cast<size_t>(f.game().dim()));
  for (double& x : theta) x = init_sigma * normal(rng);
  auto t = run_learning_from(f, steps, std::move(theta));
  t.init_sigma = init_sigma;
  return t;
}

double loss_variance(const Trajectory& t, std::optional<std::size_t> window) {
  const std::size_t w = window.value_or(t.points.size());
  if (w < 2) throw UsageError("loss_variance: window needs at least 2 points");
  if (w > t.points.size()) throw UsageError("loss_variance: window longer than trajectory");
  // Shifted by the window's first value, so a constant window gives exactly 0.
  std::vector<double> v;
  const double shift = t.points[t.points.size() - w].loss1;
  for (std::size_t i = t.points.size() - w; i < t.points.size(); ++i) v.push_back(t.points[i].loss1 - shift);
  const double mean = parallel::pairwise_sum(v) / static_cast<double>(w);
  for (double& x : v) x = (x - mean) * (x - mean);
  return parallel::pairwise_sum(v) / static_cast<double>(w - 1);
}

FieldGrid export_field(const shapers::UpdateField& f, int resolution) {
  const auto& g = f.game();
  if (g.dim() != 2) throw UsageError("export_field: game " + g.name + " is not two-dimensional");
  if (resolution < 2) throw UsageError("export_field: resolution must be >= 2");
  FieldGrid grid;
  for (int i = 0; i < resolution; ++i) {
    const double v = g.region_lo + (g.region_hi - g.region_lo) * i / (resolution - 1);
    grid.xs.push_back(v);
    grid.ys.push_back(v);
  }
  for (double x : grid.xs) {
    for (double y : grid.ys) {
      const Vector d = f(Vector{x, y});
      grid.x.push_back(x);
      grid.y.push_back(y);
      grid.dx.push_back(d[0]);
      grid.dy.push_back(d[1]);
    }
  }
  return grid;
}

}  // namespace cola::eval
