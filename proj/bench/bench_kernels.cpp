// Serial reference versus OpenMP kernels.

#include <omp.h>

#include <benchmark/benchmark.h>

#include "adview/analysis.hpp"
#include "adview/models/forest.hpp"
#include "adview/testkit.hpp"

namespace {

using namespace adview;

struct Data {
  Matrix X;
  std::vector<double> y;
};

const Data& data() {
  static const Data d = [] {
    Data out{testkit::random_matrix(2000, 8, 1), testkit::random_vector(2000, 2)};
    for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += out.X(i, 0) > 0.5 ? 3.0 : 0.0;
    return out;
  }();
  return d;
}

ForestConfig forest_config() {
  ForestConfig cfg;
  cfg.n_trees = 32;
  cfg.seed = 7;
  return cfg;
}

void BM_ForestFitSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_forest_serial(data().X, data().y, forest_config()));
  }
}

void BM_ForestFitParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_forest(data().X, data().y, forest_config()));
  }
}

void BM_ForestPredictSerial(benchmark::State& state) {
  const auto model = fit_forest_serial(data().X, data().y, forest_config());
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_serial(data().X));
}

void BM_ForestPredictParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const auto model = fit_forest_serial(data().X, data().y, forest_config());
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(data().X));
}

FeatureMatrix wide() {
  FeatureMatrix f{testkit::random_matrix(20000, 24, 3), {}};
  for (std::size_t c = 0; c < f.cols(); ++c) f.feature_names.push_back("f" + std::to_string(c));
  return f;
}

void BM_CorrelationSerial(benchmark::State& state) {
  const auto f = wide();
  const TargetVector y{testkit::random_vector(20000, 4), "y"};
  for (auto _ : state) benchmark::DoNotOptimize(correlation_matrix_serial(f, y));
}

void BM_CorrelationParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const auto f = wide();
  const TargetVector y{testkit::random_vector(20000, 4), "y"};
  for (auto _ : state) benchmark::DoNotOptimize(correlation_matrix(f, y));
}

BENCHMARK(BM_ForestFitSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestFitParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestPredictSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestPredictParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelationParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
