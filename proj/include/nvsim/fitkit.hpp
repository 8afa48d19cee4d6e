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

#pragma once

#include <span>
#include <string>
#include <vector>

namespace nvsim::fit {

struct Parameter {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;  // from the Gauss-Newton covariance; 0 if singular
};

struct FitResult {
  std::string model;  // "cosine" or "stretched_exp"
  std::vector<Parameter> params;
  double residual_norm = 0.0;  // sqrt(sum r^2)
  bool converged = false;
  int iterations = 0;
  /// False when the data cannot pin the frequency (less than one period
  /// covered, or no oscillation at all).
  bool identifiable = true;

  double value(const std::string& name) const;
};

/// alpha + beta cos(2 pi nu_R t), t in ms and nu_R in kHz.
double cosine_model(double t_ms, double alpha, double beta, double nu_kHz);
/// A0 exp(-(t/T2*)^k), t and T2* in the same unit.
double stretched_exp_model(double t, double a0, double t2, double k);

/// Least-squares fit of the cosine model. The frequency is seeded from the
/// strongest periodogram peaks, then refined by Levenberg-Marquardt with an
/// analytic Jacobian (at most 200 iterations). Parameters: alpha, beta,
/// nu_R_kHz.
FitResult fit_cosine(std::span<const double> t_ms, std::span<const double> y);

/// Least-squares fit of the stretched exponential with starts at
/// k = 1, 2, 3. Parameters: A0, T2, k (T2 in the unit of t).
FitResult fit_stretched_exp(std::span<const double> t, std::span<const double> y);

}  // namespace nvsim::fit
