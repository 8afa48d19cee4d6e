// Copyright 2026 The nvsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference versus OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nvsim/matcore.hpp"
#include "nvsim/observe.hpp"

namespace {

using namespace nvsim;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_OffsetSweepFinite(benchmark::State& state) {
  const RegisterSpec spec = RegisterSpec::natural_sample();
  SweepParams p;
  const double c = manifold_center_MHz(spec, Manifold::minus_one);
  p.carriers_MHz = linspace(c - 5.0, c + 5.0, 201);
  p.rabi_MHz = 11.6;
  for (auto _ : state) benchmark::DoNotOptimize(offset_sweep(spec, p, exec_of(state)));
}
BENCHMARK(BM_OffsetSweepFinite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RamseyTrace(benchmark::State& state) {
  const RegisterSpec spec = RegisterSpec::enriched_sample();
  RamseyParams rp;
  rp.t_max_us = 10.0;
  rp.dt_us = 0.02;
  const SequenceProgram empty;
  for (auto _ : state) benchmark::DoNotOptimize(ramsey_trace(empty, spec, RelaxationModel{}, rp, exec_of(state)));
}
BENCHMARK(BM_RamseyTrace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Dft(benchmark::State& state) {
  std::vector<double> signal(2048);
  for (std::size_t i = 0; i < signal.size(); ++i) signal[i] = std::cos(0.37 * static_cast<double>(i));
  for (auto _ : state) benchmark::DoNotOptimize(mat::dft(signal, 0.02, 2, exec_of(state)));
}
BENCHMARK(BM_Dft)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RabiNutationLindblad(benchmark::State& state) {
  const RegisterSpec spec = RegisterSpec::enriched_sample();
  NutationParams np;
  np.t_grid_ms = linspace(0.0, 0.3, 16);
  np.model = RelaxationModel::lindblad_from(spec);
  np.pulses.hard_rabi_MHz = 1.0 / (4.0 * 0.0216);
  np.pulses.compensate_pulse_delay = true;
  for (auto _ : state) benchmark::DoNotOptimize(rabi_nutation(spec, np, exec_of(state)));
}
BENCHMARK(BM_RabiNutationLindblad)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
