// Copyright 2026 The qmask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qmask/codesim.hpp"
#include "qmask/examples.hpp"
#include "qmask/region.hpp"

namespace {

using namespace qmask;

void BM_VonNeumannEntropy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
  rho(0, 1) = rho(1, 0) = 0.1 / d;
  for (auto _ : state) benchmark::DoNotOptimize(von_neumann_entropy(rho));
}
BENCHMARK(BM_VonNeumannEntropy)->Arg(4)->Arg(16)->Arg(64);

void BM_EvaluateProjection(benchmark::State& state) {
  const auto ex = examples::projection_measurement(0.5);
  const Strategy strategy = examples::projection_strategy(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_strategy(ex.source, strategy, ex.channel));
}
BENCHMARK(BM_EvaluateProjection);

void BM_EvaluateDepolarizingCorrection(benchmark::State& state) {
  auto [channel, source] = lift_random_parameter(examples::build_depolarizing(0.5));
  const AnyChannel any = channel;
  const Strategy strategy = examples::depolarizing_correction_strategy();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_strategy(source, strategy, any));
}
BENCHMARK(BM_EvaluateDepolarizingCorrection);

void BM_OptimizeProjection(benchmark::State& state) {
  const auto ex = examples::projection_measurement(0.5);
  OptimizerOptions options;
  options.restarts = 2;
  options.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_rate(ex.source, ex.channel, 0.1, options));
}
BENCHMARK(BM_OptimizeProjection)->Unit(benchmark::kMillisecond);

void BM_ExactLeakage(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClassicalModel model = mod_add_model(0.1);
  const BinningEncoder enc(generate_codebook(model.p_x(), n, 0.5, 0.7, 1), model.joint_sx(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(exact_leakage(enc, model));
}
BENCHMARK(BM_ExactLeakage)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SimulateBinning(benchmark::State& state) {
  const ClassicalModel model = mod_add_model(0.1);
  SimConfig config;
  config.n = 8;
  config.rate = 0.25;
  config.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(config, model));
}
BENCHMARK(BM_SimulateBinning)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
