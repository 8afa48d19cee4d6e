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

#include "nvsim/fitkit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

namespace nvsim::fit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kMaxIterations = 200;
constexpr int kMinPoints = 6;

using Vec = Eigen::VectorXd;
using ResidualFn = std::function<void(const Vec& p, Vec& r)>;
using JacobianFn = std::function<void(const Vec& p, Eigen::MatrixXd& j)>;

struct Functor : Eigen::DenseFunctor<double> {
  Functor(int params, int values, ResidualFn r, JacobianFn j)
      : Eigen::DenseFunctor<double>(params, values), residual(std::move(r)), jacobian(std::move(j)) {}
  int operator()(const InputType& p, ValueType& r) const {
    residual(p, r);
    return 0;
  }
  int df(const InputType& p, JacobianType& j) const {
    jacobian(p, j);
    return 0;
  }
  ResidualFn residual;
  JacobianFn jacobian;
};

struct Solution {
  Vec p;
  double norm = 0.0;
  bool converged = false;
  int iterations = 0;
  Vec std_error;
};

double residual_norm(const Functor& f, const Vec& p) {
  Vec r(f.values());
  f(p, r);
  return r.allFinite() ? r.norm() : std::numeric_limits<double>::infinity();
}

Solution refine(const Functor& f, const Vec& seed) {
  Solution s;
  s.p = seed;
  Eigen::LevenbergMarquardt<Functor> lm(const_cast<Functor&>(f));
  lm.setMaxfev(kMaxIterations);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  const auto status = lm.minimize(s.p);
  s.iterations = static_cast<int>(lm.iterations());

  // Never return something worse than the seed.
  const double seed_norm = residual_norm(f, seed);
  s.norm = residual_norm(f, s.p);
  if (!(s.norm <= seed_norm)) {
    s.p = seed;
    s.norm = seed_norm;
  }

  Eigen::MatrixXd j(f.values(), f.inputs());
  f.jacobian(s.p, j);
  Vec r(f.values());
  f(s.p, r);
  const double gradient = (j.transpose() * r).norm();
  s.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters;
  s.converged = s.converged || gradient < 1e-10;

  s.std_error = Vec::Zero(f.inputs());
  const int dof = f.values() - f.inputs();
  const Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (dof > 0 && lu.isInvertible()) {
    const double s2 = s.norm * s.norm / dof;
    s.std_error = (lu.inverse().diagonal() * s2).cwiseMax(0.0).cwiseSqrt();
  }
  return s;
}

void check_series(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw std::invalid_argument("fit: t and y differ in length");
  if (static_cast<int>(t.size()) < kMinPoints) throw std::invalid_argument("fit: need at least 6 points");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw std::invalid_argument("fit: non-finite data");
}

// Sort pairs by t so results do not depend on input order.
void sorted(std::span<const double> t, std::span<const double> y, std::vector<double>& ts, std::vector<double>& ys) {
  std::vector<std::size_t> idx(t.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return t[a] < t[b] || (t[a] == t[b] && y[a] < y[b]);
  });
  for (std::size_t i : idx) ts.push_back(t[i]), ys.push_back(y[i]);
}

}  // namespace

double FitResult::value(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p.value;
  throw std::out_of_range("fit result has no parameter '" + name + "'");
}

double cosine_model(double t_ms, double alpha, double beta, double nu_kHz) {
  return alpha + beta * std::cos(kTwoPi * nu_kHz * t_ms);
}

double stretched_exp_model(double t, double a0, double t2, double k) {
  return a0 * std::exp(-std::pow(t / t2, k));
}

FitResult fit_cosine(std::span<const double> t_in, std::span<const double> y_in) {
  check_series(t_in, y_in);
  std::vector<double> t, y;
  sorted(t_in, y_in, t, y);
  const int n = static_cast<int>(t.size());
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw std::invalid_argument("fit_cosine: time axis has zero span");
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  const double scale = std::max(1e-300, std::abs(mean) + 1.0);

  Functor f(
      3, n,
      [&](const Vec& p, Vec& r) {
        for (int i = 0; i < n; ++i) r(i) = cosine_model(t[i], p(0), p(1), p(2)) - y[i];
      },
      [&](const Vec& p, Eigen::MatrixXd& j) {
        for (int i = 0; i < n; ++i) {
          const double ph = kTwoPi * p(2) * t[i];
          j(i, 0) = 1.0;
          j(i, 1) = std::cos(ph);
          j(i, 2) = -p(1) * kTwoPi * t[i] * std::sin(ph);
        }
      });

  // Periodogram seeds on a grid fine enough for unevenly spaced data.
  double min_dt = span;
  for (int i = 1; i < n; ++i)
    if (t[i] > t[i - 1]) min_dt = std::min(min_dt, t[i] - t[i - 1]);
  const double f_max = 0.5 / min_dt;
  const double df = 1.0 / (8.0 * span);
  std::vector<std::pair<double, double>> power;  // (|S|, f)
  for (double fr = df; fr <= f_max + 1e-12; fr += df) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) acc += (y[i] - mean) * std::polar(1.0, -kTwoPi * fr * t[i]);
    power.emplace_back(std::abs(acc), fr);
  }
  std::vector<double> seed_freqs;
  for (std::size_t i = 0; i < power.size(); ++i) {
    const bool left = i == 0 || power[i].first >= power[i - 1].first;
    const bool right = i + 1 == power.size() || power[i].first >= power[i + 1].first;
    if (left && right) seed_freqs.push_back(power[i].second);
  }
  std::sort(seed_freqs.begin(), seed_freqs.end(), [&](double a, double b) {
    auto at = [&](double fr) {
      return std::find_if(power.begin(), power.end(), [&](const auto& p) { return p.second == fr; })->first;
    };
    return at(a) > at(b);
  });
  if (seed_freqs.size() > 3) seed_freqs.resize(3);
  if (seed_freqs.empty()) seed_freqs.push_back(1.0 / span);

  Solution best;
  best.norm = std::numeric_limits<double>::infinity();
  for (double nu : seed_freqs) {
    // Linear least squares for alpha, beta at fixed nu.
    Eigen::MatrixXd a(n, 2);
    Vec b(n);
    for (int i = 0; i < n; ++i) a(i, 0) = 1.0, a(i, 1) = std::cos(kTwoPi * nu * t[i]), b(i) = y[i];
    const Vec ab = a.colPivHouseholderQr().solve(b);
    Vec seed(3);
    seed << ab(0), ab(1), nu;
    Solution s = refine(f, seed);
    if (s.norm < best.norm) best = s;
  }

  FitResult out;
  out.model = "cosine";
  double nu = std::abs(best.p(2));
  const double beta = best.p(1);
  out.params = {{"alpha", best.p(0), best.std_error(0)},
                {"beta", beta, best.std_error(1)},
                {"nu_R_kHz", nu, best.std_error(2)}};
  out.residual_norm = best.norm;
  out.converged = best.converged;
  out.iterations = best.iterations;
  const bool flat = std::abs(beta) <= 1e-9 * scale;
  out.identifiable = !flat && nu * span >= 1.0;
  if (flat) out.params[1].value = 0.0;
  return out;
}

FitResult fit_stretched_exp(std::span<const double> t_in, std::span<const double> y_in) {
  check_series(t_in, y_in);
  std::vector<double> t, y;
  sorted(t_in, y_in, t, y);
  const int n = static_cast<int>(t.size());
  for (double v : t)
    if (v < 0.0) throw std::invalid_argument("fit_stretched_exp: negative time");
  if (!(t.back() > 0.0)) throw std::invalid_argument("fit_stretched_exp: time axis has zero span");

  // Parameters (A0, ln T2, ln k) keep T2 and k positive.
  Functor f(
      3, n,
      [&](const Vec& p, Vec& r) {
        const double t2 = std::exp(p(1)), k = std::exp(p(2));
        for (int i = 0; i < n; ++i) r(i) = stretched_exp_model(t[i], p(0), t2, k) - y[i];
      },
      [&](const Vec& p, Eigen::MatrixXd& j) {
        const double t2 = std::exp(p(1)), k = std::exp(p(2));
        for (int i = 0; i < n; ++i) {
          const double x = t[i] / t2;
          const double xk = x > 0.0 ? std::pow(x, k) : 0.0;
          const double e = std::exp(-xk);
          j(i, 0) = e;
          j(i, 1) = p(0) * e * k * xk;
          j(i, 2) = x > 0.0 ? -p(0) * e * xk * std::log(x) * k : 0.0;
        }
      });

  // Seeds: amplitude from the earliest point, T2 from the 1/e crossing.
  const double a0 = y.front();
  double t2 = t.back();
  for (int i = 1; i < n; ++i)
    if (std::abs(y[i]) <= std::abs(a0) / std::exp(1.0)) {
      t2 = t[i];
      break;
    }
  if (!(t2 > 0.0)) t2 = t.back();

  Solution best;
  best.norm = std::numeric_limits<double>::infinity();
  for (double k : {1.0, 2.0, 3.0}) {
    Vec seed(3);
    seed << a0, std::log(t2), std::log(k);
    Solution s = refine(f, seed);
    if (s.norm < best.norm) best = s;
  }

  FitResult out;
  out.model = "stretched_exp";
  const double t2_fit = std::exp(best.p(1)), k_fit = std::exp(best.p(2));
  out.params = {{"A0", best.p(0), best.std_error(0)},
                {"T2", t2_fit, t2_fit * best.std_error(1)},
                {"k", k_fit, k_fit * best.std_error(2)}};
  out.residual_norm = best.norm;
  out.converged = best.converged;
  out.iterations = best.iterations;
  return out;
}

}  // namespace nvsim::fit
