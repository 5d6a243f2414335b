// Copyright 2026 The qtrack Authors
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

// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "qtrack/scheme.hpp"
#include "qtrack/trajectory.hpp"

namespace {

using namespace qtrack;

SimConfig ensemble_config(std::size_t n) {
  SimConfig cfg;
  cfg.params = {1.0, 1.0};
  cfg.policy = FixedPolicy{0.5};
  cfg.t_max = 10.0;
  cfg.dt_record = 0.1;
  cfg.seed = 7;
  cfg.n_trajectories = n;
  return cfg;
}

std::vector<double> omega_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = 0.01 + 0.49 * k / (n - 1);
  return g;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const SimConfig cfg = ensemble_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ensemble_serial(cfg, PureState::excited()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const SimConfig cfg = ensemble_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ensemble(cfg, PureState::excited()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EntropyCurveSerial(benchmark::State& state) {
  const auto grid = omega_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(entropy_curve_serial(1.0, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EntropyCurveParallel(benchmark::State& state) {
  const auto grid = omega_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(entropy_curve(1.0, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntropyCurveSerial)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntropyCurveParallel)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
