#pragma once

// Experiment driver behind the `cola` executable.
//
//   cola train-cola --game tandem --alpha 1 --seeds 0-9 --out runs/
//   cola table --game tandem --alpha 1,0.5,0.3 --rule lola,hola:3,cola --checkpoint runs/*.json
//   cola run --game tandem --rule lola --alpha 1 --sigma 0.1 --seeds 0-9 --steps 1000 --svg
//   cola field --game mp --rule cola --checkpoint mp.json --alpha 10 --svg
//   cola selftest
//
// Every flag may also come from --config FILE, a flat `key = value` file
// (`alpha = 1,0.5`, `rule = lola,cgd`, ...); flags on the command line win.
// Exit codes: 0 success, 1 usage, 2 numeric failure, 3 I/O or format error.

#include <cstdint>
#include <string>
#include <vector>

#include "cola/shapers/update_field.hpp"

namespace cola::cli {

int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args exclude the program name

// Field specs: any rule accepted by shapers::parse_rule, `cola` (a loaded
// checkpoint whose game and alpha match), `cola:PATH`, `oracle:tandem+`,
// `oracle:tandem-` and `oracle:hamiltonian`.
shapers::FieldPtr resolve_field(const games::Game& game, double alpha, const std::string& spec,
                                const std::vector<std::string>& checkpoints);

// "3" -> {3}; "0-9" -> {0..9}; "1,4,7" -> {1,4,7}; ranges and lists combine.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

}  // namespace cola::cli
