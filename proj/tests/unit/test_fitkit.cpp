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
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "nvsim/fitkit.hpp"
#include "nvsim/observe.hpp"

namespace {

using namespace nvsim;

std::vector<double> cosine_data(const std::vector<double>& t, double a, double b, double nu) {
  std::vector<double> y;
  for (double v : t) y.push_back(fit::cosine_model(v, a, b, nu));
  return y;
}

double cosine_residual(const std::vector<double>& t, const std::vector<double>& y, double a, double b, double nu) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += std::pow(y[i] - fit::cosine_model(t[i], a, b, nu), 2);
  return std::sqrt(s);
}

TEST(FitKit, Models) {
  EXPECT_DOUBLE_EQ(fit::cosine_model(0.0, 0.8, 0.2, 5.0), 1.0);
  EXPECT_NEAR(fit::cosine_model(0.1, 0.8, 0.2, 5.0), 0.6, 1e-15);  // half a period
  EXPECT_DOUBLE_EQ(fit::stretched_exp_model(0.0, 0.4, 2.0, 2.5), 0.4);
  EXPECT_NEAR(fit::stretched_exp_model(2.0, 0.4, 2.0, 2.5), 0.4 / M_E, 1e-15);
}

TEST(FitKit, CosineRecoversNoiselessParameters) {
  const auto t = linspace(0.0, 0.3, 61);
  const auto r = fit::fit_cosine(t, cosine_data(t, 0.816, 0.164, 8.2));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.identifiable);
  EXPECT_EQ(r.model, "cosine");
  EXPECT_NEAR(r.value("alpha"), 0.816, 1e-8);
  EXPECT_NEAR(r.value("beta"), 0.164, 1e-8);
  EXPECT_NEAR(r.value("nu_R_kHz"), 8.2, 1e-7);
  EXPECT_LT(r.residual_norm, 1e-9);
  EXPECT_THROW(r.value("gamma"), std::out_of_range);
}

TEST(FitKit, CosineIsInvariantToSampleOrder) {
  const auto t = linspace(0.0, 0.3, 61);
  auto y = cosine_data(t, 0.742, 0.151, 7.5);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.005);
  for (auto& v : y) v += noise(rng);
  const auto a = fit::fit_cosine(t, y);
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> ts, ys;
  for (auto i : order) ts.push_back(t[i]), ys.push_back(y[i]);
  const auto b = fit::fit_cosine(ts, ys);
  for (const char* name : {"alpha", "beta", "nu_R_kHz"}) EXPECT_DOUBLE_EQ(a.value(name), b.value(name)) << name;
}

TEST(FitKit, CosineNoisyMonteCarlo) {
  const auto t = linspace(0.0, 0.3, 61);
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int trial = 0; trial < 25; ++trial) {
    auto y = cosine_data(t, 0.742, 0.151, 7.5);
    for (auto& v : y) v += noise(rng);
    const auto r = fit::fit_cosine(t, y);
    EXPECT_NEAR(r.value("nu_R_kHz"), 7.5, 0.15) << trial;
    EXPECT_NEAR(r.value("beta"), 0.151, 0.015) << trial;
    // Never worse than the generating parameters.
    EXPECT_LE(r.residual_norm, cosine_residual(t, y, 0.742, 0.151, 7.5) + 1e-12);
    for (const auto& p : r.params) EXPECT_GT(p.std_error, 0.0) << p.name;
  }
}

TEST(FitKit, FlatDataIsNotIdentifiable) {
  const auto t = linspace(0.0, 0.3, 20);
  const std::vector<double> y(t.size(), 0.7);
  const auto r = fit::fit_cosine(t, y);
  EXPECT_FALSE(r.identifiable);
  EXPECT_DOUBLE_EQ(r.value("beta"), 0.0);
  EXPECT_NEAR(r.value("alpha"), 0.7, 1e-12);
}

TEST(FitKit, SubPeriodSpanIsNotIdentifiable) {
  const auto t = linspace(0.0, 0.05, 20);  // 0.4 periods at 8 kHz
  const auto r = fit::fit_cosine(t, cosine_data(t, 0.8, 0.2, 8.0));
  EXPECT_FALSE(r.identifiable);
}

TEST(FitKit, InputValidation) {
  const std::vector<double> t = {0, 1, 2, 3, 4}, y = {1, 2, 3, 4, 5};
  EXPECT_THROW(fit::fit_cosine(t, y), std::invalid_argument);
  std::vector<double> t6 = {0, 1, 2, 3, 4, 5}, y6 = {1, 2, 3, 4, 5, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(fit::fit_cosine(t6, y6), std::invalid_argument);
  EXPECT_THROW(fit::fit_stretched_exp(t6, y), std::invalid_argument);
  const std::vector<double> tz(6, 1.0), yz = {1, 2, 3, 4, 5, 6};
  EXPECT_THROW(fit::fit_cosine(tz, yz), std::invalid_argument);
  t6[0] = -1.0;
  EXPECT_THROW(fit::fit_stretched_exp(t6, yz), std::invalid_argument);
}

TEST(FitKit, StretchedExpRecoversNoiselessParameters) {
  const auto t = linspace(0.0, 6.0, 61);
  for (auto [a, t2, k] : {std::tuple{0.39, 2.1, 2.7}, std::tuple{1.0, 1.5, 1.0}, std::tuple{0.5, 3.0, 1.6}}) {
    std::vector<double> y;
    for (double v : t) y.push_back(fit::stretched_exp_model(v, a, t2, k));
    const auto r = fit::fit_stretched_exp(t, y);
    EXPECT_EQ(r.model, "stretched_exp");
    EXPECT_NEAR(r.value("A0"), a, 1e-6 * a);
    EXPECT_NEAR(r.value("T2"), t2, 1e-6 * t2);
    EXPECT_NEAR(r.value("k"), k, 1e-6 * k);
  }
}

TEST(FitKit, StretchedExpNoisy) {
  const auto t = linspace(0.0, 6.0, 61);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.005);
  std::vector<double> y;
  for (double v : t) y.push_back(fit::stretched_exp_model(v, 0.39, 2.1, 2.7) + noise(rng));
  const auto r = fit::fit_stretched_exp(t, y);
  EXPECT_NEAR(r.value("T2"), 2.1, 0.05);
  EXPECT_NEAR(r.value("k"), 2.7, 0.3);
}

}  // namespace
