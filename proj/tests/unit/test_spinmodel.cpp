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
#include <vector>

#include "nvsim/spinmodel.hpp"

namespace {

using namespace nvsim;

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

TEST(SpinModel, SpinOperatorAlgebra) {
  for (double s : {0.5, 1.0}) {
    const auto op = spin_operators(s);
    EXPECT_TRUE(commutator(op.x, op.y).isApprox(Complex(0, 1) * op.z, 1e-14)) << s;
    const Operator casimir = op.x * op.x + op.y * op.y + op.z * op.z;
    EXPECT_TRUE(casimir.isApprox(s * (s + 1) * Operator::Identity(op.z.rows(), op.z.cols()), 1e-14));
    EXPECT_NEAR(op.z(0, 0).real(), s, 1e-15);  // descending m
  }
}

TEST(SpinModel, Presets) {
  const auto n = RegisterSpec::natural_sample();
  EXPECT_EQ(n.hilbert_dim(), 9);
  EXPECT_DOUBLE_EQ(n.field_mT, 1.8);
  EXPECT_DOUBLE_EQ(n.hyperfine_MHz, -2.16);
  const auto e = RegisterSpec::preset("enriched-sample");
  EXPECT_EQ(e.hilbert_dim(), 18);
  EXPECT_DOUBLE_EQ(e.azz_kHz, 150.0);
  EXPECT_THROW(RegisterSpec::preset("bogus"), std::invalid_argument);
}

TEST(SpinModel, ValidateRejectsBrokenInvariants) {
  RegisterSpec s;
  s.zfs_MHz = -1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = RegisterSpec{};
  s.field_mT = -0.1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = RegisterSpec{};
  s.t2s_e_us = 0.0;
  EXPECT_NO_THROW(s.validate(false));
  EXPECT_THROW(s.validate(true), std::invalid_argument);
}

TEST(SpinModel, StateSpaceIndexRoundTrip) {
  for (auto m : {Manifold::minus_one, Manifold::plus_one, Manifold::full}) {
    for (bool carbon : {false, true}) {
      const StateSpace sp(m, carbon);
      EXPECT_EQ(sp.dim(), sp.electron_dim() * 3 * sp.carbon_dim());
      EXPECT_EQ(static_cast<int>(sp.labels().size()), sp.dim());
      for (int i = 0; i < sp.dim(); ++i) EXPECT_EQ(sp.index(sp.state(i)), i);
    }
  }
  const StateSpace sp(Manifold::minus_one, false);
  EXPECT_EQ(sp.index(BasisState{1, 0, 0}), -1);
  EXPECT_EQ(sp.state(0).label(), "0 1");
  EXPECT_EQ(StateSpace(Manifold::minus_one, true).state(0).label(), "0 1 up");
}

TEST(SpinModel, ManifoldCentres) {
  const auto s = RegisterSpec::natural_sample();
  // D - m gamma_e B with gamma_e = -28 MHz/mT at 1.8 mT.
  EXPECT_NEAR(manifold_center_MHz(s, Manifold::minus_one), 2819.6, 1e-12);
  EXPECT_NEAR(manifold_center_MHz(s, Manifold::plus_one), 2920.4, 1e-12);
}

TEST(SpinModel, RotatingHamiltonianOnResonance) {
  const auto s = RegisterSpec::natural_sample();
  FrameSpec f;
  f.carrier_mw_MHz = manifold_center_MHz(s, Manifold::minus_one);
  const Operator h = rotating_hamiltonian(s, f);
  ASSERT_EQ(h.rows(), 6);
  EXPECT_TRUE(mat::is_hermitian(h));
  const StateSpace sp = state_space(s, f);
  // (A/2) sigma_z I_z with sigma_z = +1 on m_S = 0.
  EXPECT_NEAR(h(sp.index({0, 1, 0}), sp.index({0, 1, 0})).real(), -1.08, 1e-12);
  EXPECT_NEAR(h(sp.index({-1, 1, 0}), sp.index({-1, 1, 0})).real(), 1.08, 1e-12);
  EXPECT_NEAR(h(sp.index({0, 0, 0}), sp.index({0, 0, 0})).real(), 0.0, 1e-12);
  EXPECT_NEAR(electron_offset_MHz(s, f), 0.0, 1e-12);
}

TEST(SpinModel, LabHamiltonianIsHermitian) {
  for (const auto& s : {RegisterSpec::natural_sample(), RegisterSpec::enriched_sample()}) {
    const Operator h = lab_hamiltonian(s);
    EXPECT_EQ(h.rows(), s.hilbert_dim());
    EXPECT_TRUE(mat::is_hermitian(h));
  }
}

TEST(SpinModel, EsrTripletSplitByHyperfine) {
  const auto s = RegisterSpec::natural_sample();
  std::vector<double> lower;
  for (const auto& t : transition_frequencies(s, Channel::esr))
    if (t.b.ms == -1 || t.a.ms == -1) lower.push_back(t.freq_MHz);
  ASSERT_EQ(lower.size(), 3u);
  std::sort(lower.begin(), lower.end());
  EXPECT_NEAR(lower[1] - lower[0], 2.16, 1e-9);
  EXPECT_NEAR(lower[2] - lower[1], 2.16, 1e-9);
  EXPECT_NEAR(lower[1], 2819.6, 1e-9);
}

TEST(SpinModel, TransitionEnergyIsAntisymmetric) {
  const auto s = RegisterSpec::enriched_sample();
  const BasisState a{0, 1, 1}, b{-1, 0, -1};
  EXPECT_DOUBLE_EQ(transition_energy_MHz(s, a, b), -transition_energy_MHz(s, b, a));
}

TEST(SpinModel, EnrichedSampleNuclearLines) {
  auto s = RegisterSpec::enriched_sample();
  s.carbon_present = false;  // the 13C only doubles each line
  std::vector<double> lines;
  for (const auto& t : transition_frequencies(s, Channel::nmr14))
    if (t.a.ms == 0 || t.a.ms == -1) lines.push_back(t.freq_MHz);
  std::sort(lines.begin(), lines.end());
  const std::vector<double> measured = {2.822, 4.905, 4.981, 7.075};
  ASSERT_EQ(lines.size(), measured.size());
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_NEAR(lines[i], measured[i], 0.08);
  // The m_S = 0 pair is split by 2 gamma_n B = 76 kHz.
  EXPECT_NEAR(lines[2] - lines[1], 0.076, 0.002);
}

TEST(SpinModel, FitNuclearLinesRecoversSyntheticSpec) {
  RegisterSpec truth = RegisterSpec::natural_sample();
  truth.field_mT = 10.0;
  truth.hyperfine_MHz = -2.14;
  truth.quadrupole_MHz = -4.94;
  std::vector<double> lines;
  for (const auto& t : transition_frequencies(truth, Channel::nmr14))
    if (t.a.ms == 0 || t.a.ms == -1) lines.push_back(t.freq_MHz);
  const auto fit = fit_nuclear_lines(RegisterSpec::natural_sample(), lines);
  EXPECT_LT(fit.max_deviation_MHz, 1e-9);
  EXPECT_NEAR(fit.spec.field_mT, 10.0, 1e-5);
  EXPECT_NEAR(fit.spec.hyperfine_MHz, -2.14, 1e-8);
}

TEST(SpinModel, DriveOperatorsAreHermitian) {
  const auto s = RegisterSpec::natural_sample();
  for (auto m : {Manifold::minus_one, Manifold::full}) {
    FrameSpec f;
    f.subspace = m;
    f.carrier_mw_MHz = manifold_center_MHz(s, Manifold::minus_one);
    const auto d = mw_drive_operators(s, f);
    EXPECT_TRUE(mat::is_hermitian(d.x));
    EXPECT_TRUE(mat::is_hermitian(d.y));
    EXPECT_GT(d.x.cwiseAbs().maxCoeff(), 0.5);
  }
  FrameSpec f;
  const Operator p = ms0_projector(s, f);
  EXPECT_TRUE((p * p).isApprox(p));
  EXPECT_NEAR(p.trace().real(), 3.0, 1e-15);
}

TEST(SpinModel, ManifoldNames) {
  for (auto m : {Manifold::minus_one, Manifold::plus_one, Manifold::full})
    EXPECT_EQ(manifold_from_string(to_string(m)), m);
  EXPECT_EQ(manifold_from_string("minus_one"), Manifold::minus_one);
  EXPECT_THROW(manifold_from_string("sideways"), std::invalid_argument);
}

}  // namespace
