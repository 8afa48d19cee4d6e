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

// The OpenMP kernels must reproduce the serial reference bit for bit.

#include <gtest/gtest.h>

#include <vector>

#include "nvsim/observe.hpp"

namespace {

using namespace nvsim;

void expect_identical(const ExperimentResult& a, const ExperimentResult& b) {
  EXPECT_EQ(a.axis.points, b.axis.points);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_EQ(a.values[i], b.values[i]) << i;
  ASSERT_EQ(a.peaks.size(), b.peaks.size());
  for (std::size_t i = 0; i < a.peaks.size(); ++i) {
    EXPECT_EQ(a.peaks[i].position, b.peaks[i].position);
    EXPECT_EQ(a.peaks[i].amplitude, b.peaks[i].amplitude);
  }
}

TEST(Parallel, OffsetSweep) {
  const auto spec = RegisterSpec::natural_sample();
  SweepParams p;
  const double c = manifold_center_MHz(spec, Manifold::minus_one);
  p.carriers_MHz = linspace(c - 5.0, c + 5.0, 41);
  p.rabi_MHz = 11.6;
  expect_identical(offset_sweep(spec, p, Execution::serial), offset_sweep(spec, p, Execution::parallel));
  p.model = RelaxationModel::lindblad_from(spec);
  expect_identical(offset_sweep(spec, p, Execution::serial), offset_sweep(spec, p, Execution::parallel));
}

TEST(Parallel, FullModeSweep) {
  const auto spec = RegisterSpec::natural_sample();
  SweepParams p;
  p.frame = Manifold::full;
  p.carriers_MHz = linspace(2800.0, 2940.0, 29);
  p.rabi_MHz = 11.6;
  expect_identical(offset_sweep(spec, p, Execution::serial), offset_sweep(spec, p, Execution::parallel));
}

TEST(Parallel, RamseySpectrum) {
  const auto spec = RegisterSpec::enriched_sample();
  RamseyParams rp;
  rp.t_max_us = 5.0;
  rp.dt_us = 0.025;
  const SequenceProgram empty;
  expect_identical(ramsey_spectrum(empty, spec, RelaxationModel{}, rp, Execution::serial),
                   ramsey_spectrum(empty, spec, RelaxationModel{}, rp, Execution::parallel));
  const auto ens = RelaxationModel::ensemble_from(spec, 5);
  expect_identical(ramsey_trace(empty, spec, ens, rp, Execution::serial),
                   ramsey_trace(empty, spec, ens, rp, Execution::parallel));
}

TEST(Parallel, RabiNutation) {
  const auto spec = RegisterSpec::enriched_sample();
  NutationParams np;
  np.t_grid_ms = linspace(0.0, 0.2, 5);
  np.model = RelaxationModel::lindblad_from(spec);
  expect_identical(rabi_nutation(spec, np, Execution::serial), rabi_nutation(spec, np, Execution::parallel));
}

TEST(Parallel, SampledEnsembleEvolution) {
  const auto spec = RegisterSpec::natural_sample();
  auto model = RelaxationModel::ensemble_from(spec, 32);  // > 20: seeded sampling
  const auto prog = build_standard_sequence(StandardKind::u1, spec);
  const Operator rho0 = initial_state(spec, prog.frame);
  const Operator a = evolve_density_through_sequence(rho0, prog, spec, model, Execution::serial);
  const Operator b = evolve_density_through_sequence(rho0, prog, spec, model, Execution::parallel);
  EXPECT_TRUE((a.array() == b.array()).all());
}

TEST(Parallel, ExceptionsPropagateFromWorkers) {
  EXPECT_THROW(for_each_index(8, Execution::parallel,
                              [](std::size_t i) {
                                if (i == 5) throw std::runtime_error("boom");
                              }),
               std::runtime_error);
}

}  // namespace
