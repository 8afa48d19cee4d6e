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

#include "nvsim/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nvsim::mat {

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator kron(const Operator& a, const Operator& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("kron: operands must be square");
  const Eigen::Index n = b.rows();
  Operator out(a.rows() * n, a.cols() * n);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * n, j * n, n, n) = a(i, j) * b;
  return out;
}

Operator kron_all(std::span<const Operator> factors) {
  if (factors.empty()) return identity(1);
  Operator out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

double hermiticity_error(const Operator& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

bool is_hermitian(const Operator& m, double tol) {
  return m.rows() == m.cols() && hermiticity_error(m) < tol;
}

double unitarity_error(const Operator& m) {
  return (m * m.adjoint() - identity(static_cast<int>(m.rows()))).cwiseAbs().maxCoeff();
}

bool is_unitary(const Operator& m, double tol) {
  return m.rows() == m.cols() && unitarity_error(m) < tol;
}

double phase_distance(const Operator& u, const Operator& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("phase_distance: dimension mismatch");
  const Complex overlap = (u.adjoint() * v).trace();
  const Complex align = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap)
                                                : Complex(1.0, 0.0);
  const double frob = (u - align * v).norm();
  return frob / std::sqrt(2.0 * static_cast<double>(u.rows()));
}

HermitianPropagator::HermitianPropagator(const Operator& h) {
  if (!is_hermitian(h, 1e-10))
    throw std::invalid_argument("propagator: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("propagator: eigendecomposition did not converge");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Operator HermitianPropagator::at(double t_us) const {
  if (t_us < 0.0) throw std::invalid_argument("propagator: negative duration");
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k)
    phases(k) = std::polar(1.0, -kTwoPi * eigenvalues_(k) * t_us);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Operator propagator_exp(const Operator& h, double t_us) {
  return HermitianPropagator(h).at(t_us);
}

Operator partial_trace(const Operator& rho, std::span<const int> dims, int keep) {
  if (dims.empty() || keep < 0 || keep >= static_cast<int>(dims.size()))
    throw std::invalid_argument("partial_trace: bad subsystem index");
  const long total = std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
  if (total != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("partial_trace: dims do not match operator dimension");

  long before = 1, after = 1;
  for (int i = 0; i < keep; ++i) before *= dims[i];
  for (std::size_t i = keep + 1; i < dims.size(); ++i) after *= dims[i];
  const int d = dims[keep];

  Operator out = Operator::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Complex acc = 0.0;
      for (long i = 0; i < before; ++i)
        for (long k = 0; k < after; ++k)
          acc += rho((i * d + a) * after + k, (i * d + b) * after + k);
      out(a, b) = acc;
    }
  return out;
}

Operator restrict(const Operator& m, std::span<const int> indices) {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Operator out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(indices[i], indices[j]);
  return out;
}

Spectrum dft(std::span<const double> signal, double dt_us, int zero_fill, Execution exec) {
  if (signal.empty()) throw std::invalid_argument("dft: empty series");
  if (signal.size() < 2) throw std::invalid_argument("dft: need at least two samples");
  if (!(dt_us > 0.0)) throw std::invalid_argument("dft: dt must be positive");
  if (zero_fill < 1) throw std::invalid_argument("dft: zero_fill must be >= 1");

  const std::size_t n = signal.size();
  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centred(n);
  std::transform(signal.begin(), signal.end(), centred.begin(), [mean](double v) { return v - mean; });

  const std::size_t m = n * static_cast<std::size_t>(zero_fill);
  Spectrum out;
  out.bin_width_mhz = 1.0 / (static_cast<double>(m) * dt_us);
  out.nyquist_mhz = 0.5 / dt_us;
  out.freq_mhz.resize(m);
  out.values.resize(m);

  std::vector<Complex> twiddle(m);
  for (std::size_t q = 0; q < m; ++q)
    twiddle[q] = std::polar(1.0, -kTwoPi * static_cast<double>(q) / static_cast<double>(m));

  // Slot j holds signed bin k = j - neg so the frequency axis ascends.
  const std::size_t neg = m - m / 2 - 1;  // number of negative bins
  for_each_index(m, exec, [&](std::size_t j) {
    const long k = static_cast<long>(j) - static_cast<long>(neg);
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<long>(m)) % static_cast<long>(m));
    Complex acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      acc += centred[t] * twiddle[(bin * t) % m];
    }
    out.values[j] = acc;
    out.freq_mhz[j] = static_cast<double>(k) * out.bin_width_mhz;
  });
  return out;
}

}  // namespace nvsim::mat
