// Serial reference vs OpenMP for the per-sample kernels. On a single core the
// two should match; the parallel path only pays off with more threads.

#include <benchmark/benchmark.h>

#include "cola/eval/metrics.hpp"
#include "cola/learn/consistency.hpp"
#include "cola/learn/mlp.hpp"
#include "cola/shapers/rules.hpp"

namespace {

using namespace cola;

parallel::Exec exec_of(const benchmark::State& s) {
  return s.range(0) == 0 ? parallel::Exec::kSerial : parallel::Exec::kParallel;
}

void BM_Consistency(benchmark::State& state) {
  const auto g = games::game_by_name("mp");
  const auto f = shapers::make_field(g, 0.5, "hola:4");
  const auto samples = games::sample_region_flat(g, 256, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::consistency_per_sample(*f, 0.5, samples, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}

void BM_Cosine(benchmark::State& state) {
  const auto g = games::game_by_name("ipd");
  const auto a = shapers::make_field(g, 1.0, "lola");
  const auto b = shapers::make_field(g, 1.0, "cgd");
  const auto samples = games::sample_region_flat(g, 128, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::cosine_per_sample(*a, *b, samples, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 128);
}

void BM_BatchGradient(benchmark::State& state) {
  const auto g = games::game_by_name("mp");
  const auto net = learn::MlpPair::for_game(g, learn::Architecture::for_game(g), 3);
  const auto batch = games::sample_region_flat(g, 64, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(learn::batch_loss_grad(g, net, 0.5, batch, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}

}  // namespace

BENCHMARK(BM_Consistency)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cosine)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchGradient)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
