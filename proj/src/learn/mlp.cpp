#include "cola/learn/mlp.hpp"

#include <random>

namespace cola::learn {

std::string to_string(Activation a) { return a == Activation::kRelu ? "relu" : "tanh"; }

Activation parse_activation(std::string_view s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  throw UsageError("unknown activation '" + std::string(s) + "' (relu|tanh)");
}

Architecture Architecture::for_game(const games::Game& g) {
  if (g.polynomial()) return {{8}, Activation::kRelu};
  return {{16, 16, 16}, Activation::kTanh};
}

Mlp::Mlp(int input_dim, int output_dim, Architecture arch)
    : input_dim_(input_dim), output_dim_(output_dim), arch_(std::move(arch)) {
  if (input_dim < 1 || output_dim < 1) throw UsageError("mlp: dimensions must be positive");
  widths_.push_back(input_dim);
  for (int h : arch_.hidden) {
    if (h < 1) throw UsageError("mlp: hidden widths must be positive");
    widths_.push_back(h);
  }
  widths_.push_back(output_dim);
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    num_params_ += static_cast<std::size_t>(widths_[l] * widths_[l + 1] + widths_[l + 1]);
  }
  params_.assign(num_params_, 0.0);
}

void Mlp::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t k = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    const auto in = static_cast<std::size_t>(widths_[l]);
    const auto out = static_cast<std::size_t>(widths_[l + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t i = 0; i < in * out; ++i) params_[k++] = u(rng);
    for (std::size_t i = 0; i < out; ++i) params_[k++] = 0.0;
  }
}

MlpPair MlpPair::for_game(const games::Game& g, const Architecture& arch, std::uint64_t seed) {
  MlpPair p{Mlp(g.dim(), g.d1, arch), Mlp(g.dim(), g.d2, arch)};
  std::seed_seq seq{seed, std::uint64_t{0x636f6c61}};
  std::uint64_t s[2];
  seq.generate(s, s + 2);
  p.f1.initialize(s[0]);
  p.f2.initialize(s[1]);
  return p;
}

std::vector<double> MlpPair::flat_params() const {
  std::vector<double> v(f1.params());
  v.insert(v.end(), f2.params().begin(), f2.params().end());
  return v;
}

void MlpPair::set_flat_params(std::span<const double> phi) {
  if (phi.size() != num_params()) throw UsageError("mlp pair: weight vector has the wrong length");
  std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(f1.num_params()), f1.params().begin());
  std::copy(phi.begin() + static_cast<std::ptrdiff_t>(f1.num_params()), phi.end(), f2.params().begin());
}

Vector forward(const MlpPair& net, int which, std::span<const double> theta) {
  if (which == 1) return net.f1.forward(theta);
  if (which == 2) return net.f2.forward(theta);
  throw UsageError("mlp pair: network index must be 1 or 2");
}

MlpField::MlpField(games::Game game, MlpPair net, std::string label)
    : UpdateField(std::move(game)), net_(std::move(net)), label_(std::move(label)) {
  const auto& g = this->game();
  if (net_.f1.input_dim() != g.dim() || net_.f2.input_dim() != g.dim() ||
      net_.f1.output_dim() != g.d1 || net_.f2.output_dim() != g.d2) {
    throw UsageError("cola field: network dimensions do not match game " + g.name);
  }
}

std::vector<ad::Jet> MlpField::expand(std::span<const double> theta, int order) const {
  check_point(theta);
  const auto x = ad::identity_jets(theta, order);
  auto out = net_.f1.forward(std::span<const ad::Jet>(x));
  auto second = net_.f2.forward(std::span<const ad::Jet>(x));
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

}  // namespace cola::learn
