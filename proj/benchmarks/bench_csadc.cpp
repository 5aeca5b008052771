// SPDX-License-Identifier: Apache-2.0
//
// csadc - compressive acquisition and sparse recovery toolkit
// Copyright (C) 2026 The csadc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include "csadc/demodulator.hpp"
#include "csadc/evaluation.hpp"
#include "csadc/pscs.hpp"
#include "csadc/solvers.hpp"

namespace {

using namespace csadc;

TrialInstance discrete_instance(std::size_t n, std::size_t k, std::size_t l) {
  SweepSpec spec;
  spec.n = n;
  spec.k_list = {k};
  spec.l_list = {l};
  spec.base_seed = 42;
  return make_trial(spec, k, l, 0);
}

void BM_Omp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TrialInstance inst = discrete_instance(n, 5, n / 4);
  for (auto _ : state) benchmark::DoNotOptimize(omp(inst.a, inst.y, inst.a.rows(), 1e-9));
}
BENCHMARK(BM_Omp)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_BuildVMatrix(benchmark::State& state) {
  DemodConfig c;
  c.n = static_cast<std::size_t>(state.range(0));
  c.m = 8;
  c.chip_seed = 7;
  const Basis b = make_basis(BasisKind::dft_real, c.n, 0);
  for (auto _ : state) benchmark::DoNotOptimize(build_v_matrix(b, c));
}
BENCHMARK(BM_BuildVMatrix)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_BuildPscsMatrix(benchmark::State& state) {
  const std::size_t n = 128;
  const Basis b = make_basis(BasisKind::dft_real, n, 0);
  const WindowPlan plan = WindowPlan::tiling(n, 4);
  const FingerBank bank = FingerBank::with_seeds(8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_pscs_matrix(b, plan, bank));
}
BENCHMARK(BM_BuildPscsMatrix)->Unit(benchmark::kMillisecond);

void BM_SmoothL1Gd(benchmark::State& state) {
  const TrialInstance inst = discrete_instance(256, 5, 64);
  SolverConfig cfg;
  cfg.kind = SolverKind::smooth_l1_gd;
  cfg.epsilon = 1e-3;
  cfg.continuation = state.range(0) != 0;
  cfg.max_iters = 5000;
  for (auto _ : state) benchmark::DoNotOptimize(smooth_l1_gd(inst.a, inst.y, cfg));
}
BENCHMARK(BM_SmoothL1Gd)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PnormGd(benchmark::State& state) {
  const TrialInstance inst = discrete_instance(256, 5, 64);
  SolverConfig cfg;
  cfg.kind = SolverKind::pnorm_gd;
  cfg.max_iters = 5000;
  for (auto _ : state) benchmark::DoNotOptimize(pnorm_gd(inst.a, inst.y, cfg));
}
BENCHMARK(BM_PnormGd)->Unit(benchmark::kMillisecond);

void BM_SweepRow(benchmark::State& state) {
  SweepSpec spec;
  spec.n = 128;
  spec.k_list = {4};
  spec.l_list = {32};
  spec.trials = 20;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, 1));
}
BENCHMARK(BM_SweepRow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
