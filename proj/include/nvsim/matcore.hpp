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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nvsim/parallel.hpp"

namespace nvsim {

using Complex = std::complex<double>;

/// Dense complex square matrix: Hamiltonians (MHz), propagators and density
/// matrices. Hilbert spaces here never exceed 18 dimensions.
using Operator = Eigen::MatrixXcd;

namespace mat {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Operator identity(int dim);
Operator kron(const Operator& a, const Operator& b);
/// Left-to-right tensor product of all factors.
Operator kron_all(std::span<const Operator> factors);

/// max|M - M^dag| relative to max(1, max|M|).
double hermiticity_error(const Operator& m);
bool is_hermitian(const Operator& m, double tol = 1e-12);
/// max|M M^dag - I|.
double unitarity_error(const Operator& m);
bool is_unitary(const Operator& m, double tol = 1e-10);

/// Global-phase-invariant distance sqrt(1 - |Tr(U^dag V)|/dim).
///
/// Evaluated as ||U - e^{i phi} V||_F / sqrt(2 dim) with phi = arg Tr(U^dag V),
/// which is the same quantity for unitaries but does not lose half the digits
/// to cancellation near zero.
double phase_distance(const Operator& u, const Operator& v);

/// exp(-i 2 pi h t) for Hermitian h in MHz and t in us, evaluated by
/// diagonalising h once so that many times can share the decomposition.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const Operator& h);

  Operator at(double t_us) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Operator& eigenvectors() const { return eigenvectors_; }

 private:
  Eigen::VectorXd eigenvalues_;
  Operator eigenvectors_;
};

Operator propagator_exp(const Operator& h, double t_us);

/// Reduced density matrix of subsystem `keep` for a tensor layout `dims`.
Operator partial_trace(const Operator& rho, std::span<const int> dims, int keep);

/// Projector-free restriction M[idx, idx].
Operator restrict(const Operator& m, std::span<const int> indices);

struct Spectrum {
  std::vector<double> freq_mhz;
  std::vector<Complex> values;
  double bin_width_mhz = 0.0;
  double nyquist_mhz = 0.0;
};

/// Mean-subtracted, optionally zero-filled DFT of a real trace sampled every
/// `dt_us`. Bin k sits at k/(N dt zero_fill); bins above N/2 are reported as
/// negative frequencies so the axis is ascending and centred on zero.
Spectrum dft(std::span<const double> signal, double dt_us, int zero_fill = 1,
             Execution exec = Execution::parallel);

}  // namespace mat
}  // namespace nvsim
