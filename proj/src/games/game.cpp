#include "cola/games/game.hpp"

#include <random>

namespace cola::games {

const std::vector<std::string>& game_names() {
  static const std::vector<std::string> names = {"tandem", "hamiltonian", "balduzzi", "mp",
                                                 "ultimatum", "ipd", "chicken"};
  return names;
}

Game game_by_name(std::string_view name) {
  if (name == "tandem") return {GameKind::kTandem, "tandem", 1, 1, -1.0, 1.0, 0.1};
  if (name == "hamiltonian") return {GameKind::kHamiltonian, "hamiltonian", 1, 1, -1.0, 1.0, 1.0};
  if (name == "balduzzi") return {GameKind::kBalduzzi, "balduzzi", 1, 1, -1.0, 1.0, 1.0};
  if (name == "mp") return {GameKind::kMatchingPennies, "mp", 1, 1, -7.0, 7.0, 1.0};
  if (name == "ultimatum") return {GameKind::kUltimatum, "ultimatum", 1, 1, -7.0, 7.0, 1.0};
  if (name == "chicken") return {GameKind::kChicken, "chicken", 1, 1, -7.0, 7.0, 1.0};
  if (name == "ipd") return {GameKind::kIpd, "ipd", 5, 5, -7.0, 7.0, 1.0};
  throw UsageError("unknown game '" + std::string(name) +
                   "' (tandem|hamiltonian|balduzzi|mp|ultimatum|ipd|chicken)");
}

std::vector<Vector> sample_region_flat(const Game& game, int n, std::uint64_t seed) {
  if (n < 1) throw UsageError("sample_region: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(game.region_lo, game.region_hi);
  std::vector<Vector> out(static_cast<size_t>(n), Vector(static_cast<size_t>(game.dim())));
  for (auto& v : out) {
    for (double& x : v) x = u(rng);
  }
  return out;
}

std::vector<JointParams> sample_region(const Game& game, int n, std::uint64_t seed) {
  std::vector<JointParams> out;
  for (const auto& v : sample_region_flat(game, n, seed)) {
    out.push_back(JointParams::split(v, static_cast<size_t>(game.d1)));
  }
  return out;
}

}  // namespace cola::games
