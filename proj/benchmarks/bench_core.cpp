// Microbenchmarks for the hot paths: dense products, recorded training
// steps, forest construction and scoring.

#include <benchmark/benchmark.h>

#include "irad/iforest.hpp"
#include "irad/model.hpp"
#include "irad/rng.hpp"
#include "irad/trainer.hpp"

namespace {

void BM_Matmul(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  irad::Rng rng(1);
  const irad::Matrix a = rng.normal_matrix(n, n);
  const irad::Matrix b = rng.normal_matrix(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irad::matmul(a, b));
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_MlpForward(benchmark::State& state) {
  irad::Rng rng(2);
  irad::ModelConfig mc;
  const irad::IradModel model = irad::make_model(mc, rng);
  const irad::Matrix x = rng.normal_matrix(64, mc.d_x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irad::encode_shared(model, x));
  }
}
BENCHMARK(BM_MlpForward);

void BM_TrainStep(benchmark::State& state) {
  irad::Rng rng(3);
  irad::ModelConfig mc;
  irad::IradModel model = irad::make_model(mc, rng);
  irad::TrainConfig tc;
  irad::Trainer trainer(model, tc);
  const irad::Matrix x_src = rng.normal_matrix(tc.batch_size, mc.d_x);
  const irad::Matrix x_tgt = rng.normal_matrix(tc.batch_size, mc.d_x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trainer.train_step(x_src, x_tgt, rng));
  }
}
BENCHMARK(BM_TrainStep);

void BM_ForestFit(benchmark::State& state) {
  irad::Rng rng(4);
  const irad::Matrix x = rng.normal_matrix(2048, 8);
  for (auto _ : state) {
    irad::Rng local(5);
    benchmark::DoNotOptimize(irad::fit_forest(x, 100, 256, local));
  }
}
BENCHMARK(BM_ForestFit);

void BM_ForestScore(benchmark::State& state) {
  irad::Rng rng(6);
  const irad::Matrix train = rng.normal_matrix(2048, 8);
  irad::Rng fit_rng(7);
  const irad::IsolationForest forest = irad::fit_forest(train, 100, 256, fit_rng);
  const irad::Matrix test = rng.normal_matrix(1000, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irad::score_all(forest, test));
  }
  state.SetItemsProcessed(state.iterations() * test.rows());
}
BENCHMARK(BM_ForestScore);

}  // namespace

BENCHMARK_MAIN();
