#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cola/autodiff/scalar.hpp"
#include "cola/errors.hpp"
#include "cola/games/game.hpp"
#include "cola/shapers/update_field.hpp"

namespace cola::learn {

enum class Activation { kRelu, kTanh };

std::string to_string(Activation a);
Activation parse_activation(std::string_view s);

struct Architecture {
  std::vector<int> hidden;
  Activation activation = Activation::kRelu;

  // One ReLU layer of 8 for the polynomial games, three tanh layers of 16
  // otherwise.
  static Architecture for_game(const games::Game& g);
  bool operator==(const Architecture&) const = default;
};

// Dense feed-forward net with a linear output layer. Parameters are one flat
// vector: for each layer the row-major weight matrix (out x in) then the bias.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int input_dim, int output_dim, Architecture arch);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  const Architecture& architecture() const { return arch_; }
  std::size_t num_params() const { return num_params_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
  void initialize(std::uint64_t seed);

  // Forward pass with weights of type W on inputs of type S.
  template <class S, class W>
  std::vector<S> forward(std::span<const W> w, std::span<const S> x) const;

  template <class S>
  std::vector<S> forward(std::span<const S> x) const {
    return forward<S, double>(params_, x);
  }

 private:
  int input_dim_ = 0;
  int output_dim_ = 0;
  Architecture arch_;
  std::vector<int> widths_;  // input, hidden..., output
  std::size_t num_params_ = 0;
  std::vector<double> params_;
};

template <class S, class W>
std::vector<S> Mlp::forward(std::span<const W> w, std::span<const S> x) const {
  using ad::relu;
  using ad::tanh;
  if (static_cast<int>(x.size()) != input_dim_) {
    throw UsageError("mlp: expected " + std::to_string(input_dim_) + " inputs, got " +
                     std::to_string(x.size()));
  }
  if (w.size() != num_params_) throw UsageError("mlp: weight vector has the wrong length");
  std::vector<S> cur(x.begin(), x.end());
  std::size_t k = 0;
  for (std::size_t layer = 0; layer + 1 < widths_.size(); ++layer) {
    const auto in = static_cast<std::size_t>(widths_[layer]);
    const auto out = static_cast<std::size_t>(widths_[layer + 1]);
    const std::size_t bias = k + in * out;
    const bool last = layer + 2 == widths_.size();
    std::vector<S> next;
    next.reserve(out);
    for (std::size_t o = 0; o < out; ++o) {
      S acc = S(w[bias + o]);
      for (std::size_t i = 0; i < in; ++i) acc = acc + cur[i] * S(w[k + o * in + i]);
      if (!last) acc = arch_.activation == Activation::kRelu ? S(relu(acc)) : S(tanh(acc));
      next.push_back(std::move(acc));
    }
    cur = std::move(next);
    k = bias + out;
  }
  return cur;
}

// The two learned update functions; both read the full joint parameters.
struct MlpPair {
  Mlp f1;
  Mlp f2;

  static MlpPair for_game(const games::Game& g, const Architecture& arch, std::uint64_t seed);
  std::size_t num_params() const { return f1.num_params() + f2.num_params(); }
  // Concatenated (phi1, phi2).
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> phi);
};

// forward(net, which, theta)
Vector forward(const MlpPair& net, int which, std::span<const double> theta);

// A trained pair viewed as an update field on its game.
class MlpField : public shapers::UpdateField {
 public:
  MlpField(games::Game game, MlpPair net, std::string label = "cola");
  std::string name() const override { return label_; }
  std::vector<ad::Jet> expand(std::span<const double> theta, int order) const override;
  const MlpPair& net() const { return net_; }

 private:
  MlpPair net_;
  std::string label_;
};

}  // namespace cola::learn
