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

#include "nvsim/matcore.hpp"

namespace nvsim {

/// Physical description of the register: NV electron spin-1, 14N spin-1 and
/// optionally one 13C spin-1/2. Units are carried in the field names.
struct RegisterSpec {
  double field_mT = 1.8;
  double zfs_MHz = 2870.0;
  double quadrupole_MHz = -4.95;
  double hyperfine_MHz = -2.16;
  double gamma_e_MHz_per_mT = -28.0;
  double gamma_n14_kHz_per_mT = 3.1;
  bool carbon_present = false;
  double azz_kHz = 150.0;
  double azx_kHz = 0.0;
  double gamma_c13_kHz_per_mT = 10.705;
  double t1_e_ms = 3.5;
  double t2s_e_us = 2.5;
  double t2s_n_ms = 2.1;

  int hilbert_dim() const { return carbon_present ? 18 : 9; }
  int carbon_dim() const { return carbon_present ? 2 : 1; }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate(bool dissipation_enabled = false) const;

  /// Natural-abundance sample at 1.8 mT, electron + 14N only.
  static RegisterSpec natural_sample();
  /// 12C-enriched sample with one 13C (Azz = 150 kHz). The field is inferred
  /// from the 76 kHz splitting of the two m_S = 0 14N lines.
  static RegisterSpec enriched_sample();
  static RegisterSpec preset(const std::string& name);
};

/// Electron manifold kept by the rotating-frame model.
enum class Manifold { minus_one, plus_one, full };

std::string to_string(Manifold m);
Manifold manifold_from_string(const std::string& s);

struct FrameSpec {
  double carrier_mw_MHz = 0.0;
  double carrier_rf_MHz = 0.0;
  Manifold subspace = Manifold::minus_one;
};

/// One Zeeman product state. Carbon projection is stored doubled (+1/-1) and
/// is 0 when no carbon is present.
struct BasisState {
  int ms = 0;
  int mi = 0;
  int mc2 = 0;

  bool operator==(const BasisState&) const = default;
  std::string label() const;
};

/// Index bookkeeping for the full space or one two-level electron manifold.
class StateSpace {
 public:
  StateSpace(Manifold manifold, bool carbon);

  Manifold manifold() const { return manifold_; }
  bool carbon() const { return carbon_; }
  int dim() const;
  int electron_dim() const { return static_cast<int>(electron_levels_.size()); }
  int carbon_dim() const { return carbon_ ? 2 : 1; }
  const std::vector<int>& electron_levels() const { return electron_levels_; }

  int index(const BasisState& s) const;  // -1 when not in this space
  BasisState state(int index) const;
  std::vector<std::string> labels() const;
  /// Indices of all states with the given electron projection.
  std::vector<int> indices_with_ms(int ms) const;

 private:
  Manifold manifold_;
  bool carbon_;
  std::vector<int> electron_levels_;
};

StateSpace state_space(const RegisterSpec& spec, const FrameSpec& frame);

struct SpinOperators {
  Operator x, y, z;
};

/// Angular-momentum matrices for s = 1/2 or 1 in the descending-m basis.
SpinOperators spin_operators(double s);

/// D Sz^2 - gamma_e B Sz + P Iz^2 - gamma_n B Iz + A Sz Iz
///   [+ Azz Sz sz + Azx Sz sx - gamma_c B sz], in MHz on the full 9/18-dim space.
Operator lab_hamiltonian(const RegisterSpec& spec);

/// Centre of the ESR line of manifold m = -1 or +1: D - m gamma_e B.
double manifold_center_MHz(const RegisterSpec& spec, Manifold m);
/// Effective electron offset nu = centre - carrier.
double electron_offset_MHz(const RegisterSpec& spec, const FrameSpec& frame);

/// Rotating-frame Hamiltonian in MHz.
///
/// Two-level manifolds use the pseudo spin sigma_z = +1 on |0>_e and return
/// (nu/2) sigma_z + (A/2) sigma_z I_z for the {0,-1} manifold, with the
/// hyperfine coefficient flipping sign for {0,+1} and analogous 13C terms.
/// 14N quadrupole and Zeeman terms commute with everything and are dropped.
/// The full mode keeps the lab Hamiltonian and subtracts nu_c Sz^2.
Operator rotating_hamiltonian(const RegisterSpec& spec, const FrameSpec& frame);

/// Operators X, Y such that a resonant MW drive of Rabi frequency Omega with
/// phase phi reads (Omega/2)(cos(phi) X + sin(phi) Y) in the rotating frame.
struct DriveOperators {
  Operator x, y;
};
/// In full mode `only_ms` = +-1 restricts the drive to one ESR transition
/// (0 drives both).
DriveOperators mw_drive_operators(const RegisterSpec& spec, const FrameSpec& frame, int only_ms = 0);

/// Electron Sz restricted to the frame's state space (diag over m_S values).
Operator electron_sz(const RegisterSpec& spec, const FrameSpec& frame);
/// 14N Iz on the frame's state space.
Operator nuclear_iz(const RegisterSpec& spec, const FrameSpec& frame);
/// Projector onto m_S = 0.
Operator ms0_projector(const RegisterSpec& spec, const FrameSpec& frame);

enum class Channel { esr, nmr14, nmr13 };

struct Transition {
  BasisState a;
  BasisState b;
  double freq_MHz = 0.0;
};

/// Lab-frame transitions of the selected spin, sorted by frequency.
std::vector<Transition> transition_frequencies(const RegisterSpec& spec, Channel channel);

/// Signed lab energy difference E(b) - E(a) in MHz.
double transition_energy_MHz(const RegisterSpec& spec, const BasisState& a, const BasisState& b);

/// Least-squares fit of field, 14N hyperfine and quadrupole to measured NMR
/// line positions (matched as sorted sets).
struct NuclearLineFit {
  RegisterSpec spec;
  std::vector<double> model_MHz;
  double max_deviation_MHz = 0.0;
};
NuclearLineFit fit_nuclear_lines(const RegisterSpec& seed, std::span<const double> measured_MHz);

}  // namespace nvsim
