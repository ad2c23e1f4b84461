// benchmarks/solvers_bench.cc

// Copyright 2026 The artikit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "artikit/filter.h"
#include "artikit/linalg.h"
#include "artikit/rng.h"

namespace artikit {
namespace {

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

// Range(0) frames, Range(1) feature dim; 12 targets as in an alignment fit.
void BM_Lasso(benchmark::State& state, LassoUpdate update) {
  Rng rng(1);
  const Matrix x = random_matrix(rng, state.range(0), state.range(1));
  const Matrix y = x * random_matrix(rng, state.range(1), 12) + random_matrix(rng, state.range(0), 12);
  LassoConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lasso(x, y, cfg, update));
}
BENCHMARK_CAPTURE(BM_Lasso, gram, LassoUpdate::kGram)
    ->Args({2000, 64})->Args({8000, 256})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Lasso, residual, LassoUpdate::kResidual)
    ->Args({2000, 64})->Args({8000, 256})->Unit(benchmark::kMillisecond);

void BM_LeastSquares(benchmark::State& state) {
  Rng rng(2);
  const Matrix x = random_matrix(rng, state.range(0), state.range(1));
  const Matrix y = random_matrix(rng, state.range(0), 12);
  for (auto _ : state) benchmark::DoNotOptimize(fit_least_squares(x, y, 1e-3));
}
BENCHMARK(BM_LeastSquares)->Args({8000, 256})->Args({8000, 768})->Unit(benchmark::kMillisecond);

void BM_Filtfilt(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = rng.normal();
  const ButterworthLowpass f(5, 6.0, 50.0);
  for (auto _ : state) benchmark::DoNotOptimize(f.filtfilt(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Filtfilt)->Arg(250)->Arg(5000);

}  // namespace
}  // namespace artikit
