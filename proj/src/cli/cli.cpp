#include "cola/cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "cola/autodiff/differentiate.hpp"
#include "cola/errors.hpp"
#include "cola/eval/csv.hpp"
#include "cola/eval/metrics.hpp"
#include "cola/eval/oracles.hpp"
#include "cola/eval/svg.hpp"
#include "cola/learn/checkpoint.hpp"
#include "cola/learn/consistency.hpp"
#include "cola/learn/train.hpp"
#include "cola/shapers/rules.hpp"

namespace cola::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string game = "tandem";
  std::vector<std::string> rules;
  std::vector<std::string> checkpoints;
  std::vector<double> alphas;
  long steps = -1;  // -1: subcommand default
  double sigma = -1.0;  // -1: the game's init_sigma
  std::string seeds = "0";
  int samples = 0;  // 0: 250 on the IPD, 1000 otherwise
  std::string out = ".";
  bool svg = false;
  int resolution = 21;
  std::string exec = "serial";
  int batch = 0;
  double lr = 1e-3;
  long decay_interval = 0;
  long log_interval = 100;
};

std::string tag(double v) { return eval::fmt(v); }

// Rule strings contain ':' which some filesystems dislike.
std::string file_tag(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == '/' || c == '\\') c = '-';
  }
  return s;
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path probe = fs::path(dir) / ".cola-write-probe";
  {
    std::ofstream f(probe);
    if (!f) throw IoError("output directory is not writable: " + dir);
  }
  fs::remove(probe, ec);
  return fs::path(dir);
}

int sample_count(const Options& o, const games::Game& g) {
  if (o.samples > 0) return o.samples;
  if (o.samples < 0) throw UsageError("--samples must be positive");
  return g.kind == games::GameKind::kIpd ? 250 : 1000;
}

void require_alphas(const Options& o) {
  if (o.alphas.empty()) throw UsageError("--alpha is required");
  for (double a : o.alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("alpha must be positive, got " + tag(a));
  }
}

void cmd_train(const Options& o) {
  require_alphas(o);
  const auto game = games::game_by_name(o.game);
  const auto dir = prepare_out_dir(o.out);
  for (double alpha : o.alphas) {
    for (auto seed : parse_seeds(o.seeds)) {
      learn::ColaConfig cfg;
      cfg.game = game;
      cfg.alpha = alpha;
      cfg.steps = o.steps >= 0 ? o.steps : learn::default_steps(game);
      cfg.seed = seed;
      cfg.batch = o.batch;
      cfg.lr = o.lr;
      cfg.decay_interval = o.decay_interval;
      cfg.log_interval = o.log_interval;
      cfg.exec = parallel::parse_exec(o.exec);
      const auto result = learn::train_cola(cfg);

      eval::CsvTable trace;
      trace.header = {"step", "mean_sq_consistency"};
      for (const auto& p : result.trace.points) trace.add_row({eval::fmt(p.step), eval::fmt(p.mean_loss)});

      const std::string stem = "cola_" + game.name + "_a" + tag(alpha) + "_s" + std::to_string(seed);
      learn::save_checkpoint({result.net, game.name, alpha, seed}, (dir / (stem + ".json")).string());
      eval::write_csv((dir / (stem + "_trace.csv")).string(), trace);
      std::cout << stem << ": final loss " << eval::fmt(result.trace.points.back().mean_loss) << " after "
                << cfg.steps << " steps (" << result.trace.seconds << " s)\n";
    }
  }
}

void cmd_table(const Options& o) {
  require_alphas(o);
  if (o.rules.empty()) throw UsageError("--rule needs at least one field");
  const auto game = games::game_by_name(o.game);
  const int n = sample_count(o, game);
  const auto seed = parse_seeds(o.seeds).front();
  const auto exec = parallel::parse_exec(o.exec);
  const auto dir = prepare_out_dir(o.out);

  eval::CsvTable table = eval::consistency_table_header();
  eval::CsvTable cosine;
  cosine.header = {"game", "alpha", "fieldA", "fieldB", "mean", "std"};
  for (double alpha : o.alphas) {
    std::vector<shapers::FieldPtr> fields;
    for (const auto& spec : o.rules) fields.push_back(resolve_field(game, alpha, spec, o.checkpoints));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      auto report = eval::measure_consistency(*fields[i], alpha, n, seed, exec);
      report.field = o.rules[i];
      table.add_row(eval::consistency_row(report));
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto c = eval::cosine_similarity(*fields[0], *fields[i], n, seed, exec);
      cosine.add_row({game.name, tag(alpha), o.rules[0], o.rules[i], eval::fmt(c.mean), eval::fmt(c.std)});
    }
  }
  eval::write_csv((dir / ("table_" + game.name + ".csv")).string(), table);
  std::cout << table.to_string();
  if (!cosine.rows.empty()) {
    eval::write_csv((dir / ("cosine_" + game.name + ".csv")).string(), cosine);
    std::cout << cosine.to_string();
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

void cmd_run(const Options& o) {
  require_alphas(o);
  if (o.rules.size() != 1) throw UsageError("run takes exactly one --rule");
  const auto game = games::game_by_name(o.game);
  const long steps = o.steps >= 0 ? o.steps : 1000;
  const double sigma = o.sigma >= 0.0 ? o.sigma : game.init_sigma;
  const auto seeds = parse_seeds(o.seeds);
  const auto dir = prepare_out_dir(o.out);

  for (double alpha : o.alphas) {
    const auto field = resolve_field(game, alpha, o.rules[0], o.checkpoints);
    const std::string stem = "run_" + game.name + "_" + file_tag(o.rules[0]) + "_a" + tag(alpha);
    std::vector<eval::Trajectory> runs;
    for (auto seed : seeds) {
      runs.push_back(eval::run_learning(*field, steps, sigma, seed));
      eval::write_csv((dir / (stem + "_s" + std::to_string(seed) + ".csv")).string(),
                      eval::trajectory_csv(runs.back()));
    }

    // Diverged runs drop out of the statistics from the step they stopped.
    eval::CsvTable agg;
    agg.header = {"step", "n_active", "n_diverged", "loss1_mean", "loss1_std", "loss2_mean", "loss2_std"};
    std::vector<double> xs;
    eval::Series s1{"loss1", {}, {}}, s2{"loss2", {}, {}};
    for (long t = 0; t <= steps; ++t) {
      std::vector<double> l1, l2;
      int diverged = 0;
      for (const auto& r : runs) {
        if (t < static_cast<long>(r.points.size())) {
          l1.push_back(r.points[static_cast<std::size_t>(t)].loss1);
          l2.push_back(r.points[static_cast<std::size_t>(t)].loss2);
        } else if (r.diverged) {
          ++diverged;
        }
      }
      if (l1.empty()) {
        agg.add_row({eval::fmt(t), "0", eval::fmt(diverged), "nan", "nan", "nan", "nan"});
        continue;
      }
      const double m1 = mean_of(l1), d1 = std_of(l1), m2 = mean_of(l2), d2 = std_of(l2);
      agg.add_row({eval::fmt(t), eval::fmt(static_cast<long>(l1.size())), eval::fmt(diverged), eval::fmt(m1),
                   eval::fmt(d1), eval::fmt(m2), eval::fmt(d2)});
      xs.push_back(static_cast<double>(t));
      s1.y.push_back(m1);
      s1.band.push_back(d1);
      s2.y.push_back(m2);
      s2.band.push_back(d2);
    }
    eval::write_csv((dir / (stem + "_aggregate.csv")).string(), agg);

    int n_div = 0;
    for (const auto& r : runs) n_div += r.diverged ? 1 : 0;
    std::cout << stem << ": " << runs.size() << " runs, " << n_div << " diverged\n";

    if (o.svg) {
      learn::write_file_atomic((dir / (stem + ".svg")).string(),
                               eval::line_plot_svg(xs, {s1, s2}, game.name + " " + o.rules[0] + " alpha=" + tag(alpha),
                                                   "loss"));
      if (game.dim() == 2) {
        learn::write_file_atomic((dir / (stem + "_field.svg")).string(),
                                 eval::quiver_svg(eval::export_field(*field, o.resolution), stem));
      }
    }
  }
}

void cmd_field(const Options& o) {
  require_alphas(o);
  if (o.rules.size() != 1) throw UsageError("field takes exactly one --rule");
  const auto game = games::game_by_name(o.game);
  if (game.dim() != 2) throw UsageError("field export needs a 2-parameter game, " + game.name + " has " +
                                        std::to_string(game.dim()));
  const auto dir = prepare_out_dir(o.out);
  for (double alpha : o.alphas) {
    const auto field = resolve_field(game, alpha, o.rules[0], o.checkpoints);
    const auto grid = eval::export_field(*field, o.resolution);
    const std::string stem = "field_" + game.name + "_" + file_tag(o.rules[0]) + "_a" + tag(alpha);
    eval::write_csv((dir / (stem + ".csv")).string(), eval::field_csv(grid));
    if (o.svg) learn::write_file_atomic((dir / (stem + ".svg")).string(), eval::quiver_svg(grid, stem));
    std::cout << stem << ": " << grid.size() << " nodes\n";
  }
}

// Quick oracle and invariant checks; the full suites live in the test tree.
int cmd_selftest() {
  int failed = 0;
  auto report = [&failed](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    if (!ok) ++failed;
  };
  const auto tandem = games::game_by_name("tandem");
  const auto points = games::sample_region_flat(tandem, 20, 7);

  bool nest = true;
  for (int d = 1; d <= 9; ++d) nest = nest && ad::nest_check(d);
  report("nested-gradients", nest, "depth 1..9");

  double worst = 0.0;
  for (int n = 0; n <= 8; ++n) {
    const shapers::HolaField f(tandem, 1.0, n, shapers::Flavor::kExact);
    for (const auto& p : points) {
      const auto got = f(p);
      const auto want = eval::oracle_tandem_hola(n, p);
      for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    }
  }
  report("tandem-hola-oracle", worst <= 1e-9, "max abs err " + eval::fmt(worst));

  const auto lola = shapers::make_field(tandem, 1.0, "lola");
  const auto r = eval::measure_consistency(*lola, 1.0, 200, 1);
  report("tandem-lola-consistency", std::abs(r.mean_sq - 128.0) <= 1e-6, "mean " + eval::fmt(r.mean_sq));

  worst = 0.0;
  for (double alpha : {0.3, 1.0}) {
    const auto cgd = shapers::make_field(tandem, alpha, "cgd");
    for (const auto& p : points) {
      const double want = -2.0 * alpha * (p[0] + p[1] - 1.0) / (1.0 + 2.0 * alpha);
      const auto got = (*cgd)(p);
      worst = std::max({worst, std::abs(got[0] - want), std::abs(got[1] - want)});
    }
  }
  report("tandem-cgd-closed-form", worst <= 1e-9, "max abs err " + eval::fmt(worst));

  double resid = 0.0;
  for (double alpha : {0.3, 0.5, 1.0}) {
    for (auto b : {eval::Branch::kPlus, eval::Branch::kMinus}) {
      const eval::TandemConsistentField f(alpha, b);
      resid = std::max(resid, eval::measure_consistency(f, alpha, 200, 2).mean_sq);
    }
  }
  for (double alpha : {0.5, 1.0, 2.0}) {
    const eval::HamiltonianConsistentField f(alpha);
    resid = std::max(resid, eval::measure_consistency(f, alpha, 200, 3).mean_sq);
  }
  report("consistent-oracles", resid <= 1e-18, "max mean sq " + eval::fmt(resid));

  const eval::HamiltonianConsistentField hf(1.0);
  const auto traj = eval::run_learning_from(hf, 10, {0.7, -0.4});
  double rel = 0.0;
  for (std::size_t t = 1; t < traj.points.size(); ++t) {
    auto sq = [](const Vector& v) { return v[0] * v[0] + v[1] * v[1]; };
    const double ratio = sq(traj.points[t].theta) / sq(traj.points[t - 1].theta);
    rel = std::max(rel, std::abs(ratio - 2.0 / 9.0) / (2.0 / 9.0));
  }
  report("hamiltonian-contraction", rel <= 1e-12, "max rel err " + eval::fmt(rel));

  std::cout << (failed == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failed == 0 ? 0 : 2;
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (part.empty()) throw UsageError("bad seed list '" + text + "'");
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw UsageError("bad seed range '" + part + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad seed list '" + text + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

shapers::FieldPtr resolve_field(const games::Game& game, double alpha, const std::string& spec,
                                const std::vector<std::string>& checkpoints) {
  if (spec == "cola") {
    for (const auto& path : checkpoints) {
      auto ck = learn::load_checkpoint(path, &game);
      if (ck.game == game.name && std::abs(ck.alpha - alpha) <= 1e-12 * std::max(1.0, alpha)) {
        return std::make_shared<learn::MlpField>(game, std::move(ck.net));
      }
    }
    throw UsageError("missing checkpoint: no --checkpoint for game " + game.name + " at alpha " + tag(alpha));
  }
  if (spec.rfind("cola:", 0) == 0) {
    auto ck = learn::load_checkpoint(spec.substr(5), &game);
    return std::make_shared<learn::MlpField>(game, std::move(ck.net));
  }
  if (spec.rfind("oracle:", 0) == 0) {
    const std::string which = spec.substr(7);
    if ((which == "tandem+" || which == "tandem-") && game.kind == games::GameKind::kTandem) {
      return std::make_shared<eval::TandemConsistentField>(
          alpha, which == "tandem+" ? eval::Branch::kPlus : eval::Branch::kMinus);
    }
    if (which == "hamiltonian" && game.kind == games::GameKind::kHamiltonian) {
      return std::make_shared<eval::HamiltonianConsistentField>(alpha);
    }
    throw UsageError("oracle '" + which + "' does not exist for game " + game.name);
  }
  return shapers::make_field(game, alpha, spec);
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Opponent-shaping update rules and consistent learned updates"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");

  Options o;
  app.add_option("--game", o.game, "game name")->check(CLI::IsMember(games::game_names()));
  app.add_option("--rule", o.rules, "field specs (comma separated)")->delimiter(',');
  app.add_option("--checkpoint", o.checkpoints, "checkpoint files used by the `cola` field")->delimiter(',');
  app.add_option("--alpha", o.alphas, "look-ahead rates (comma separated)")->delimiter(',');
  app.add_option("--steps", o.steps, "training or learning steps");
  app.add_option("--sigma", o.sigma, "initial-parameter std for `run`");
  app.add_option("--seeds", o.seeds, "seeds: N, A-B or a comma list");
  app.add_option("--samples", o.samples, "evaluation samples (default 1000, IPD 250)");
  app.add_option("--out", o.out, "output directory");
  app.add_flag("--svg", o.svg, "also emit SVG plots");
  app.add_option("--resolution", o.resolution, "grid points per axis for field plots");
  app.add_option("--exec", o.exec, "serial | parallel")->check(CLI::IsMember({"serial", "parallel"}));
  app.add_option("--batch", o.batch, "COLA batch size (0: per-game default)");
  app.add_option("--lr", o.lr, "COLA Adam step size");
  app.add_option("--decay-interval", o.decay_interval, "decay the step size by 0.9 every N steps (0: per game)");
  app.add_option("--log-interval", o.log_interval, "trace row every N steps");

  auto* train = app.add_subcommand("train-cola", "train a COLA update-function pair");
  auto* table = app.add_subcommand("table", "consistency (and cosine) table over alphas and fields");
  auto* run = app.add_subcommand("run", "learning trajectories over seeds");
  auto* field = app.add_subcommand("field", "update field on a grid");
  auto* selftest = app.add_subcommand("selftest", "oracle and invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train->parsed()) cmd_train(o);
    if (table->parsed()) cmd_table(o);
    if (run->parsed()) cmd_run(o);
    if (field->parsed()) cmd_field(o);
    if (selftest->parsed()) return cmd_selftest();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"cola"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cola::cli
