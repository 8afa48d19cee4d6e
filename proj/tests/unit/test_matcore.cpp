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

#include <cmath>
#include <random>
#include <vector>

#include "nvsim/matcore.hpp"

namespace {

using namespace nvsim;

Operator pauli_x() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Operator pauli_z() {
  Operator m = Operator::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Operator random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Operator a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

TEST(MatCore, IdentityAndKron) {
  EXPECT_TRUE(mat::identity(3).isApprox(Operator::Identity(3, 3)));
  const Operator k = mat::kron(pauli_z(), mat::identity(3));
  ASSERT_EQ(k.rows(), 6);
  EXPECT_EQ(k(0, 0), Complex(1.0));
  EXPECT_EQ(k(4, 4), Complex(-1.0));
  EXPECT_EQ(k(0, 3), Complex(0.0));
  const std::vector<Operator> f = {pauli_x(), pauli_z(), mat::identity(2)};
  EXPECT_TRUE(mat::kron_all(f).isApprox(mat::kron(mat::kron(pauli_x(), pauli_z()), mat::identity(2))));
}

TEST(MatCore, KronMixedProductProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator a = random_hermitian(2, rng), b = random_hermitian(3, rng);
    const Operator c = random_hermitian(2, rng), d = random_hermitian(3, rng);
    EXPECT_TRUE((mat::kron(a, b) * mat::kron(c, d)).isApprox(mat::kron(a * c, b * d), 1e-12));
  }
}

TEST(MatCore, HermiticityAndUnitarityChecks) {
  EXPECT_TRUE(mat::is_hermitian(pauli_x()));
  Operator n = pauli_x();
  n(0, 1) = 2.0;
  EXPECT_FALSE(mat::is_hermitian(n));
  EXPECT_TRUE(mat::is_unitary(pauli_x()));
  EXPECT_FALSE(mat::is_unitary(2.0 * pauli_x()));
}

TEST(MatCore, PropagatorOfPauliZ) {
  // exp(-i 2 pi (sz/2) t): phases -pi t and +pi t.
  const double t = 0.3;
  const Operator u = mat::propagator_exp(pauli_z() / 2.0, t);
  EXPECT_NEAR(std::abs(u(0, 0) - std::exp(Complex(0, -M_PI * t))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(1, 1) - std::exp(Complex(0, M_PI * t))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(0, 1)), 0.0, 1e-15);
}

TEST(MatCore, PropagatorGroupPropertyAndUnitarity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator h = random_hermitian(9, rng);
    const mat::HermitianPropagator p(h);
    const Operator u1 = p.at(0.17), u2 = p.at(0.41);
    EXPECT_LT(mat::unitarity_error(u1), 1e-12);
    EXPECT_LT((u1 * u2 - p.at(0.58)).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((p.at(0.0) - mat::identity(9)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((mat::propagator_exp(h, 0.17) - u1).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MatCore, PhaseDistanceIgnoresGlobalPhase) {
  std::mt19937_64 rng(3);
  const Operator u = mat::propagator_exp(random_hermitian(6, rng), 1.0);
  EXPECT_LT(mat::phase_distance(u, std::exp(Complex(0, 1.234)) * u), 1e-14);
  EXPECT_NEAR(mat::phase_distance(mat::identity(2), pauli_x()), 1.0, 1e-15);
}

TEST(MatCore, PartialTraceOfProductState) {
  std::mt19937_64 rng(5);
  Operator a = random_hermitian(3, rng);
  a = a * a.adjoint();
  a /= a.trace();
  Operator b = random_hermitian(2, rng);
  b = b * b.adjoint();
  b /= b.trace();
  const std::vector<int> dims = {3, 2};
  EXPECT_TRUE(mat::partial_trace(mat::kron(a, b), dims, 0).isApprox(a, 1e-12));
  EXPECT_TRUE(mat::partial_trace(mat::kron(a, b), dims, 1).isApprox(b, 1e-12));
}

TEST(MatCore, Restrict) {
  Operator m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Complex(10 * i + j);
  const std::vector<int> idx = {2, 0};
  const Operator r = mat::restrict(m, idx);
  EXPECT_EQ(r(0, 0), Complex(22));
  EXPECT_EQ(r(0, 1), Complex(20));
  EXPECT_EQ(r(1, 0), Complex(2));
}

TEST(MatCore, DftFindsToneWithinOneBin) {
  const double dt = 0.02, f = 2.16;
  std::vector<double> s(500);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.3 + std::cos(mat::kTwoPi * f * dt * static_cast<double>(i));
  const auto spec = mat::dft(s, dt, 2, Execution::serial);
  EXPECT_NEAR(spec.bin_width_mhz, 1.0 / (500 * dt * 2), 1e-15);
  EXPECT_NEAR(spec.nyquist_mhz, 1.0 / (2 * dt), 1e-12);
  ASSERT_EQ(spec.freq_mhz.size(), spec.values.size());
  for (std::size_t i = 1; i < spec.freq_mhz.size(); ++i) EXPECT_LT(spec.freq_mhz[i - 1], spec.freq_mhz[i]);
  std::size_t best = 0;
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    if (spec.freq_mhz[i] > 0 && std::abs(spec.values[i]) > std::abs(spec.values[best])) best = i;
  EXPECT_LE(std::abs(spec.freq_mhz[best] - f), spec.bin_width_mhz);
}

TEST(MatCore, DftSerialAndParallelAgreeBitwise) {
  std::vector<double> s(777);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  for (auto& v : s) v = u(rng);
  const auto a = mat::dft(s, 0.01, 2, Execution::serial);
  const auto b = mat::dft(s, 0.01, 2, Execution::parallel);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    EXPECT_EQ(a.values[i], b.values[i]);
    EXPECT_EQ(a.freq_mhz[i], b.freq_mhz[i]);
  }
}

}  // namespace
