#pragma once

// Checkpoints are JSON documents:
//   {"format": "cola-checkpoint", "format_version": 1, "game": "tandem",
//    "alpha": 1.0, "seed": 0, "input_dim": 2,
//    "architecture": {"hidden": [8], "activation": "relu"},
//    "nets": [{"output_dim": 1, "params": [...]}, {...}]}
// Doubles are written in shortest round-trip form, so weights reload exactly.

#include <cstdint>
#include <string>

#include "cola/games/game.hpp"
#include "cola/learn/mlp.hpp"

namespace cola::learn {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  MlpPair net;
  std::string game;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

// Throws IoError if unreadable, FormatError on malformed/truncated content or
// a version mismatch, UsageError if `expected` is given and the networks do
// not fit its dimensions.
Checkpoint load_checkpoint(const std::string& path, const games::Game* expected = nullptr);

// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cola::learn
