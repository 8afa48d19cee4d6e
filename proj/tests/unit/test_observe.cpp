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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nvsim/observe.hpp"

namespace {

using namespace nvsim;
using Rows = std::vector<std::pair<std::string, std::string>>;

void expect_rows(const TruthTable& t, const Rows& expected) {
  ASSERT_EQ(t.rows.size(), expected.size());
  for (const auto& [in, out] : expected) {
    const auto it = std::find_if(t.rows.begin(), t.rows.end(), [&](const TruthRow& r) { return r.input == in; });
    ASSERT_NE(it, t.rows.end()) << in;
    EXPECT_EQ(it->output, out) << in;
    EXPECT_GT(it->population, 1.0 - 1e-9) << in;
    EXPECT_FALSE(it->tie);
  }
}

TruthTable ideal_table(StandardKind kind, const RegisterSpec& spec) {
  StandardParams p;
  p.ideal_pulses = true;
  const auto prog = build_standard_sequence(kind, spec, p);
  const Operator u = sequence_propagator(prog, spec);
  if (kind == StandardKind::cnot1_13c || kind == StandardKind::cnot2_13c) {
    const auto e = embed_electron_carbon(u, spec, prog.frame.subspace);
    return truth_table(e.u, e.labels);
  }
  return truth_table(u, state_space(spec, prog.frame).labels());
}

TEST(Observe, TruthTableU1) {
  expect_rows(ideal_table(StandardKind::u1, RegisterSpec::natural_sample()),
              {{"0 1", "-1 1"}, {"0 0", "0 0"}, {"0 -1", "-1 -1"}, {"-1 1", "0 1"}, {"-1 0", "-1 0"}, {"-1 -1", "0 -1"}});
}

TEST(Observe, TruthTableU2) {
  expect_rows(ideal_table(StandardKind::u2, RegisterSpec::natural_sample()),
              {{"0 1", "0 1"}, {"0 0", "-1 0"}, {"0 -1", "0 -1"}, {"-1 1", "-1 1"}, {"-1 0", "0 0"}, {"-1 -1", "-1 -1"}});
}

TEST(Observe, TruthTableCnotCarbon) {
  const auto spec = RegisterSpec::enriched_sample();
  expect_rows(ideal_table(StandardKind::cnot1_13c, spec), {{"1 up", "1 up"},
                                                           {"1 down", "1 down"},
                                                           {"0 up", "0 up"},
                                                           {"0 down", "-1 down"},
                                                           {"-1 up", "-1 up"},
                                                           {"-1 down", "0 down"}});
  expect_rows(ideal_table(StandardKind::cnot2_13c, spec), {{"1 up", "0 up"},
                                                           {"1 down", "1 down"},
                                                           {"0 up", "1 up"},
                                                           {"0 down", "0 down"},
                                                           {"-1 up", "-1 up"},
                                                           {"-1 down", "-1 down"}});
}

TEST(Observe, TruthTableFlagsTies) {
  Operator h = Operator::Constant(2, 2, 1.0 / std::sqrt(2.0));
  h(1, 1) *= -1.0;
  const auto t = truth_table(h, {"a", "b"});
  EXPECT_TRUE(t.rows[0].tie);
  EXPECT_NEAR(t.rows[0].population, 0.5, 1e-15);
}

TEST(Observe, Eq9PopulationRange) {
  EXPECT_NEAR(eq9_population(0.0, -2.16), 0.5, 1e-15);
  EXPECT_NEAR(eq9_population(1.08, -2.16), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(eq9_population(-1.08, -2.16), 1.0 / 3.0, 1e-15);
}

TEST(Observe, IdealSweepMatchesEq9) {
  const auto spec = RegisterSpec::natural_sample();
  const double c = manifold_center_MHz(spec, Manifold::minus_one);
  SweepParams p;
  const auto nu = linspace(-5.0, 5.0, 101);
  for (double v : nu) p.carriers_MHz.push_back(c - v);
  const auto r = offset_sweep(spec, p);
  ASSERT_EQ(r.values.size(), nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i)
    EXPECT_NEAR(r.values[i], eq9_population(nu[i], spec.hyperfine_MHz), 1e-9) << nu[i];
  EXPECT_NO_THROW(r.validate());
}

TEST(Observe, SweepSegmentsOverrideRabi) {
  const auto spec = RegisterSpec::natural_sample();
  const double c = manifold_center_MHz(spec, Manifold::minus_one);
  SweepParams a;
  a.carriers_MHz = {c - 1.0, c + 1.0};
  a.rabi_MHz = 11.6;
  SweepParams b = a;
  b.rabi_MHz = 3.0;
  b.segments = {{c - 10.0, c + 10.0, 11.6}};
  EXPECT_EQ(offset_sweep(spec, a, Execution::serial).values, offset_sweep(spec, b, Execution::serial).values);
}

TEST(Observe, Linspace) {
  const auto v = linspace(1.0, 2.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v.front(), 1.0);
  EXPECT_DOUBLE_EQ(v.back(), 2.0);
  EXPECT_DOUBLE_EQ(v[2], 1.5);
  EXPECT_EQ(linspace(3.0, 4.0, 1), std::vector<double>{3.0});
}

TEST(Observe, RamseySpectrumResolvesNitrogenTriplet) {
  const auto spec = RegisterSpec::natural_sample();
  RamseyParams rp;
  const auto r = ramsey_spectrum(SequenceProgram{}, spec, RelaxationModel{}, rp);
  const double bin = 1.0 / (rp.t_max_us * rp.zero_fill);
  ASSERT_EQ(r.peaks.size(), 3u);
  std::vector<double> expected;
  for (int mi : {1, 0, -1}) expected.push_back(esr_line_offset_MHz(spec, Manifold::minus_one, {0, mi, 0}));
  std::sort(expected.begin(), expected.end());
  EXPECT_NEAR(expected[2] - expected[0], 2 * 2.16, 1e-9);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(r.peaks[i].position - expected[i]), bin) << i;
    EXPECT_GT(r.peaks[i].amplitude, 0.0);
  }
}

TEST(Observe, RamseySpectrumResolvesCarbonSplitting) {
  const auto spec = RegisterSpec::enriched_sample();
  RamseyParams rp;
  rp.t_max_us = 40.0;
  rp.dt_us = 0.025;
  const auto r = ramsey_spectrum(SequenceProgram{}, spec, RelaxationModel{}, rp);
  const double bin = 1.0 / (rp.t_max_us * rp.zero_fill);
  ASSERT_EQ(r.peaks.size(), 6u);
  for (std::size_t i = 0; i < 6; i += 2) EXPECT_LE(std::abs(r.peaks[i + 1].position - r.peaks[i].position - 0.150), bin);
}

TEST(Observe, PickPeaksOnSyntheticLines) {
  std::vector<double> x, y;
  for (int i = 0; i <= 400; ++i) {
    const double v = -2.0 + 0.01 * i;
    x.push_back(v);
    y.push_back(std::exp(-std::pow((v - 0.5) / 0.05, 2)) - 0.5 * std::exp(-std::pow((v + 1.0) / 0.05, 2)));
  }
  std::vector<double> mag(y.size());
  std::transform(y.begin(), y.end(), mag.begin(), [](double v) { return std::abs(v); });
  const auto peaks = pick_peaks(x, y, mag);
  ASSERT_EQ(peaks.size(), 2u);
  EXPECT_NEAR(peaks[0].position, -1.0, 1e-3);
  EXPECT_LT(peaks[0].amplitude, 0.0);
  EXPECT_NEAR(peaks[1].position, 0.5, 1e-3);
  EXPECT_NEAR(peaks[1].magnitude, 1.0, 1e-2);
}

TEST(Observe, FidelityMeasures) {
  const auto spec = RegisterSpec::natural_sample();
  StandardParams ip;
  ip.ideal_pulses = true;
  const auto prog = build_standard_sequence(StandardKind::u1, spec, ip);
  const Operator u = sequence_propagator(prog, spec);
  const StateSpace space = state_space(spec, prog.frame);
  std::vector<int> all(6);
  for (int i = 0; i < 6; ++i) all[i] = i;
  EXPECT_NEAR(process_fidelity(u, u, all), 1.0, 1e-14);
  // Only the two m_I = 0 states overlap with the identity.
  EXPECT_LE(process_fidelity(mat::identity(6), u, all), 1.0 / 3.0 + 1e-12);
  const auto flipped = flipped_inputs(u, space);
  EXPECT_EQ(flipped.size(), 4u);
  for (int i : flipped) EXPECT_NE(space.state(i).mi, 0);
  const auto unitary_channel = [&](const Operator& rho) { return Operator(u * rho * u.adjoint()); };
  EXPECT_NEAR(population_fidelity(unitary_channel, u, flipped), 1.0, 1e-12);
  const auto idle = [](const Operator& rho) { return rho; };
  EXPECT_NEAR(population_fidelity(idle, u, flipped), 0.0, 1e-12);
}

TEST(Observe, EmbeddedGateIsUnitary) {
  const auto spec = RegisterSpec::enriched_sample();
  const auto prog = build_standard_sequence(StandardKind::cnot1_13c, spec);
  const auto e = embed_electron_carbon(sequence_propagator(prog, spec), spec, prog.frame.subspace);
  EXPECT_EQ(e.u.rows(), 6);
  EXPECT_EQ(e.labels.size(), 6u);
  EXPECT_EQ(e.labels.front(), "1 up");
  EXPECT_LT(mat::unitarity_error(e.u), 1e-10);
}

TEST(Observe, ResultValidation) {
  ExperimentResult r;
  r.axis.points = {0.0, 1.0};
  r.values = {0.5};
  EXPECT_THROW(r.validate(), std::logic_error);
  r.values = {0.5, 1.2};
  r.value_unit = "population";
  EXPECT_THROW(r.validate(), std::logic_error);
  r.values = {0.5, 1.0};
  EXPECT_NO_THROW(r.validate());
}

TEST(Observe, SpecHashIsStable) {
  const auto a = RegisterSpec::natural_sample();
  auto b = a;
  EXPECT_EQ(spec_hash(a), spec_hash(b));
  b.azz_kHz += 1e-9;
  EXPECT_NE(spec_hash(a), spec_hash(b));
}

TEST(Observe, RabiNutationIsPopulationValued) {
  const auto spec = RegisterSpec::enriched_sample();
  NutationParams np;
  np.t_grid_ms = linspace(0.0, 0.12, 7);
  const auto r = rabi_nutation(spec, np);
  EXPECT_EQ(r.axis.points, np.t_grid_ms);
  EXPECT_NO_THROW(r.validate());
  // A 180 deg RF rotation (t = 1 / (2 nu_R)) changes the signal.
  EXPECT_GT(std::abs(r.values[0] - r.values[3]), 0.05);
}

}  // namespace
