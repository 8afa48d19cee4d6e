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

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "nvsim/matcore.hpp"
#include "nvsim/sequence.hpp"
#include "nvsim/spinmodel.hpp"

namespace nvsim {

enum class RelaxationMode { none, lindblad, static_ensemble };

std::string to_string(RelaxationMode m);
RelaxationMode relaxation_mode_from_string(const std::string& s);

/// Relaxation parameters. Infinite times switch the corresponding channel off.
struct RelaxationModel {
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  RelaxationMode mode = RelaxationMode::none;
  double t1_e_ms = kInfinity;
  double t2s_e_us = kInfinity;
  double t2s_n_ms = kInfinity;
  double ensemble_sigma_MHz = 0.0;
  int ensemble_samples = 1;
  std::uint64_t seed = 20260101;

  void validate() const;

  /// Electron pure-dephasing rate 1/T2* - 1/(2 T1) in 1/us.
  double electron_dephasing_rate() const;

  /// Lindblad model with the register's relaxation times.
  static RelaxationModel lindblad_from(const RegisterSpec& spec);
  /// Static Gaussian detuning ensemble whose free-induction envelope
  /// exp(-(t/T2*)^2) matches the register's electron T2*.
  static RelaxationModel ensemble_from(const RegisterSpec& spec, int samples = 16);
};

/// Gaussian standard deviation (MHz) whose Ramsey envelope decays as exp(-(t/T2*)^2).
double sigma_from_t2star(double t2s_us);

/// Collapse operators on the frame's state space. Nuclear dephasing is
/// included only when `with_nuclear` is set.
std::vector<Operator> collapse_operators(const RegisterSpec& spec, const FrameSpec& frame,
                                         const RelaxationModel& model, bool with_nuclear);

/// Column-major vectorised Lindblad generator (1/us).
Operator liouvillian(const Operator& h_MHz, std::span<const Operator> collapse);

/// exp(L t) acting on column-major vec(rho).
Operator lindblad_superoperator(const Operator& h_MHz, std::span<const Operator> collapse, double t_us);
/// Apply a superoperator to rho; the result is re-symmetrised.
Operator apply_superoperator(const Operator& s, const Operator& rho);

/// rho(t) under the Lindblad equation, via exp(L t) on vec(rho).
Operator lindblad_propagate(const Operator& rho, const Operator& h_MHz, std::span<const Operator> collapse,
                            double t_us);
/// Convenience overload building the collapse set (nuclear dephasing on).
Operator lindblad_propagate(const Operator& rho, const Operator& h_MHz, const RelaxationModel& model,
                            const RegisterSpec& spec, const FrameSpec& frame, double t_us);

/// Initial state after optical pumping: |0><0| (x) E3/3 [(x) E2/2].
Operator initial_state(const RegisterSpec& spec, const FrameSpec& frame);

struct DensityCheck {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok(double tol = 1e-8) const {
    return trace_error < tol && hermiticity_error < tol && min_eigenvalue > -tol;
  }
};
DensityCheck check_density(const Operator& rho);
/// Throws std::invalid_argument unless rho is a density matrix to `tol`.
void require_density(const Operator& rho, double tol = 1e-10);

/// Normalised detuning nodes and weights for the static ensemble.
struct EnsembleNodes {
  std::vector<double> offsets_MHz;
  std::vector<double> weights;
};
EnsembleNodes ensemble_nodes(const RelaxationModel& model);

/// A program compiled once into a chain of maps (unitaries, or Lindblad
/// superoperators plus frame kicks) so that many input states can be pushed
/// through it. `electron_shift_MHz` adds a static detuning shift * S_z to
/// every timed segment. Static-ensemble models are not accepted here; use
/// ensemble_members() to expand them.
class SequenceChannel {
 public:
  SequenceChannel(const SequenceProgram& prog, const RegisterSpec& spec, const RelaxationModel& model,
                  double electron_shift_MHz = 0.0);

  Operator apply(const Operator& rho) const;
  int dim() const { return dim_; }

 private:
  struct Step {
    std::optional<Operator> unitary;
    std::optional<Operator> superop;
    Operator pre;
    Operator kick;
  };
  std::vector<Step> steps_;
  int dim_ = 0;
};

/// One closed or Lindblad run contributing `weight` to an average.
struct EnsembleMember {
  double shift_MHz = 0.0;
  double weight = 1.0;
  RelaxationModel model;
};
/// Expands a static ensemble into closed-system members; other modes yield
/// a single member carrying the model unchanged.
std::vector<EnsembleMember> ensemble_members(const RelaxationModel& model);

/// Run a compiled program on rho0. Lindblad mode applies nuclear dephasing in
/// delays and RF pulses only; static_ensemble averages closed-system runs
/// over electron detunings in a fixed reduction order.
Operator evolve_density_through_sequence(const Operator& rho0, const SequenceProgram& prog,
                                         const RegisterSpec& spec, const RelaxationModel& model,
                                         Execution exec = Execution::parallel);

/// Population of m_S = 0.
double ms0_population(const Operator& rho, const RegisterSpec& spec, const FrameSpec& frame);

}  // namespace nvsim
