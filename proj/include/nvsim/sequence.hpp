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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nvsim/matcore.hpp"
#include "nvsim/spinmodel.hpp"

namespace nvsim {

enum class DriveChannel { mw, rf };

/// 14N transition (m_S fixed) addressed by a transition-framed RF pulse.
struct NmrTarget {
  int ms = 0;
  int mi_a = 0;
  int mi_b = -1;
  bool operator==(const NmrTarget&) const = default;
};

struct Pulse {
  DriveChannel channel = DriveChannel::mw;
  double carrier_MHz = 0.0;
  std::optional<double> rabi_MHz;  // empty: ideal, zero-duration pulse
  double phase_deg = 0.0;          // 0 = x, 90 = y
  double flip_deg = 90.0;
  std::optional<NmrTarget> target;

  bool ideal() const { return !rabi_MHz.has_value(); }
  double duration_us() const { return ideal() ? 0.0 : flip_deg / (360.0 * *rabi_MHz); }
  bool operator==(const Pulse&) const = default;
};

struct Delay {
  double duration_us = 0.0;
  bool operator==(const Delay&) const = default;
};

using SequenceElement = std::variant<Pulse, Delay>;

struct SequenceProgram {
  std::string name;
  FrameSpec frame;
  std::vector<SequenceElement> elements;

  /// Structural checks that do not need a register (non-empty, positive
  /// Rabi, flip ranges, non-negative delays).
  void validate() const;
};

double total_duration(const SequenceProgram& prog);
SequenceProgram concat(const SequenceProgram& first, const SequenceProgram& second);
/// Reversed order with every pulse phase advanced by 180 deg. Only ideal
/// pulses invert exactly; delays are rejected.
SequenceProgram inverse(const SequenceProgram& prog);

/// One piece of a compiled program: apply the diagonal `pre_kick`, evolve
/// under `generator` for `duration_us`, then apply `frame_kick`. The kicks
/// convert between the program frame and a pulse's own carrier frame; both
/// carriers run phase-continuously from the start of the program. Ideal
/// pulses carry their (already converted) rotation in `instantaneous`.
struct Segment {
  enum class Kind { delay, mw_pulse, rf_pulse };
  Kind kind = Kind::delay;
  Operator generator;
  double duration_us = 0.0;
  Operator pre_kick;
  Operator frame_kick;
  std::optional<Operator> instantaneous;

  Operator unitary() const;
};

/// Compile a program against a register. Carrier and RWA problems are thrown
/// as std::invalid_argument; soft problems are appended to `warnings`.
std::vector<Segment> compile_segments(const SequenceProgram& prog, const RegisterSpec& spec,
                                      std::vector<std::string>* warnings = nullptr);

/// Product of element propagators, rightmost (first) element applied first.
Operator sequence_propagator(const SequenceProgram& prog, const RegisterSpec& spec,
                             std::vector<std::string>* warnings = nullptr);

/// Closed form of (pi/2)_x - tau - (pi/2)_y on the electron-qubit x 14N-qutrit
/// space under (nu/2) sigma_z + (A/2) sigma_z I_z:
///
///   U = -(i/sqrt2) [c_-(sz - i) + c_+(sx + sy)] (x) sin(pi A tau) Iz
///       +(i/sqrt2) [c_+(sz - i) - c_-(sx + sy)] (x) {[cos(pi A tau) - 1] Iz^2 + 1}
///
/// with c_+- = cos(pi nu tau +- pi/4).
Operator closed_form_gate(double nu_MHz, double a_eff_MHz, double tau_us);

enum class StandardKind {
  u1,
  u2,
  cnot1_13c,
  cnot2_13c,
  transfer_pulsed,
  transfer_selective,
  ramsey_fid,
  rabi_nutation,
};

StandardKind standard_kind_from_string(const std::string& s);
std::string to_string(StandardKind k);

enum class TransferKind { pulsed, selective };

struct StandardParams {
  double hard_rabi_MHz = 10.0;
  bool ideal_pulses = false;
  double cnot13_rabi_MHz = 0.5;
  double selective_rabi_MHz = 0.21;
  /// Ramsey: free-evolution time and carrier detuning from the manifold centre.
  double ramsey_delay_us = 0.0;
  double ramsey_detuning_MHz = 0.0;
  /// Rabi nutation on |0,0> <-> |0,-1>.
  TransferKind transfer = TransferKind::pulsed;
  double rf_rabi_kHz = 8.2;
  double rf_duration_us = 0.0;
  std::optional<double> rf_carrier_MHz;  // default: on resonance
  /// Shorten the free delay of two-pulse gates by 4 t_p / pi (t_p = finite
  /// pi/2 duration) so the pulses' own precession is absorbed.
  bool compensate_pulse_delay = false;
  /// Overrides the builder's MW carrier (offset sweeps).
  std::optional<double> carrier_MHz;
};

SequenceProgram build_standard_sequence(StandardKind kind, const RegisterSpec& spec,
                                        const StandardParams& params = {});

/// Canonical JSON form with explicit units in every key.
nlohmann::json to_json(const SequenceProgram& prog);
SequenceProgram program_from_json(const nlohmann::json& j);

}  // namespace nvsim
