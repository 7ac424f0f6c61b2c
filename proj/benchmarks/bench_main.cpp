#include <benchmark/benchmark.h>

#include <numeric>

#include "smotepipe/dataset.hpp"
#include "smotepipe/linear.hpp"
#include "smotepipe/metrics.hpp"
#include "smotepipe/smote.hpp"
#include "smotepipe/synth.hpp"
#include "smotepipe/tree.hpp"

using namespace smotepipe;

namespace {

const Dataset& dr_train() {
  static const Dataset ds = stratified_split(synth::generate(synth::preset("dr-like")), SplitSpec{}).train;
  return ds;
}

void BM_KnnWithinClass(benchmark::State& state) {
  const Dataset ds = synth::generate({{static_cast<std::size_t>(state.range(0)), 2}, 2.0, 0, {}});
  std::vector<std::size_t> rows(ds.rows() - 2);
  std::iota(rows.begin(), rows.end(), 0);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn_within_class(ds.features(), rows, q, 5));
    q = (q + 1) % rows.size();
  }
}
BENCHMARK(BM_KnnWithinClass)->Arg(200)->Arg(2000);

void BM_SmoteDrLike(benchmark::State& state) {
  const Dataset& train = dr_train();
  for (auto _ : state) benchmark::DoNotOptimize(smote(train, SmoteParams{}));
}
BENCHMARK(BM_SmoteDrLike)->Unit(benchmark::kMillisecond);

void BM_FitLinear(benchmark::State& state) {
  const Dataset& train = dr_train();
  const auto kind = static_cast<LinearKind>(state.range(0));
  TrainConfig cfg;
  cfg.epochs = 100;
  cfg.tolerance = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(fit_linear(kind, train, cfg));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_FitLinear)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_FitForest(benchmark::State& state) {
  const Dataset& train = dr_train();
  const auto kind = static_cast<ForestKind>(state.range(0));
  const auto weights = balanced_class_weights(class_counts(train));
  ForestParams params;
  params.n_trees = 20;
  for (auto _ : state) benchmark::DoNotOptimize(fit_forest(kind, train, weights, params, 0));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_FitForest)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);

void BM_ComputeMetrics(benchmark::State& state) {
  Rng rng(1);
  std::vector<Label> truth(10000);
  std::vector<Label> pred(10000);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = rng.uniform_index(5);
    pred[i] = rng.uniform_index(5);
  }
  for (auto _ : state) {
    const ConfusionMatrix cm = confusion_matrix(truth, pred, 5);
    benchmark::DoNotOptimize(compute_metrics(cm));
  }
}
BENCHMARK(BM_ComputeMetrics);

}  // namespace

BENCHMARK_MAIN();
