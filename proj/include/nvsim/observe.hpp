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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nvsim/dissipation.hpp"
#include "nvsim/sequence.hpp"
#include "nvsim/spinmodel.hpp"

namespace nvsim {

struct Axis {
  std::string name;
  std::string unit;
  std::vector<double> points;
};

/// Spectral line found by peak picking. `amplitude` is signed (real part
/// after phase correction); `magnitude` is |S| at the interpolated maximum.
struct Peak {
  double position = 0.0;
  double amplitude = 0.0;
  double magnitude = 0.0;
};

struct ExperimentResult {
  Axis axis;
  std::string value_name;
  std::string value_unit;
  std::vector<double> values;
  std::map<std::string, std::string> metadata;
  std::vector<Peak> peaks;

  /// Throws unless axis and values have equal length (and populations are
  /// within [-1e-9, 1 + 1e-9] when value_unit is "population").
  void validate() const;
};

/// Stable short hash of every RegisterSpec field, for result metadata.
std::string spec_hash(const RegisterSpec& spec);

// ---------------------------------------------------------------------------
// Ramsey spectroscopy

struct RamseyParams {
  double t_max_us = 10.0;
  double dt_us = 0.02;
  /// Readout carrier sits this far below the manifold centre so every line
  /// has a positive offset; the reported axis is offset minus detuning.
  double detuning_MHz = 5.0;
  std::optional<double> rabi_MHz;  // empty: ideal readout pulses
  int zero_fill = 2;
  /// Hann apodization before the transform (suppresses window sidelobes).
  bool apodize = true;
  Manifold manifold = Manifold::minus_one;
};

/// Signal P(m_S = 0) of (pi/2)_x - t - (pi/2)_-x after `prep`, one value per
/// time point (t = 0, dt, ...).
ExperimentResult ramsey_trace(const SequenceProgram& prep, const RegisterSpec& spec,
                              const RelaxationModel& model, const RamseyParams& params,
                              Execution exec = Execution::parallel);

/// Ramsey trace -> mean-removed, apodized DFT -> phase-corrected real spectrum with
/// picked peaks. Axis: offset from the manifold centre in MHz. Pass an empty
/// program (no elements) for the thermal reference spectrum. Pulses in
/// `prep` keep their own, phase-continuous carriers.
ExperimentResult ramsey_spectrum(const SequenceProgram& prep, const RegisterSpec& spec,
                                 const RelaxationModel& model, const RamseyParams& params,
                                 Execution exec = Execution::parallel);

/// Local maxima of |S| above 3x the median |S|, refined by quadratic
/// interpolation. `values` and `magnitudes` share the axis.
std::vector<Peak> pick_peaks(const std::vector<double>& axis, const std::vector<double>& values,
                             const std::vector<double>& magnitudes);

/// Offset (MHz from manifold centre, literal frame convention) of the ESR
/// line starting from `ground`, an m_S = 0 basis state.
double esr_line_offset_MHz(const RegisterSpec& spec, Manifold manifold, const BasisState& ground);

// ---------------------------------------------------------------------------
// Truth tables and fidelities

struct TruthRow {
  std::string input;
  std::string output;
  double population = 0.0;
  bool tie = false;
};

struct TruthTable {
  std::vector<TruthRow> rows;
};

TruthTable truth_table(const Operator& u, const std::vector<std::string>& labels);

/// Restrict a subspace-mode gate on the 14N m_I = +1, 13C slice to the six
/// states {+1, 0, -1} x {up, down}; the electron level outside the manifold
/// is left untouched.
struct EmbeddedGate {
  Operator u;
  std::vector<std::string> labels;
};
EmbeddedGate embed_electron_carbon(const Operator& u_subspace, const RegisterSpec& spec, Manifold manifold,
                                   int mi = 1);

/// |Tr(P U_target^dag U_actual P)| / dim(P) on the listed basis indices.
double process_fidelity(const Operator& u_actual, const Operator& u_target, const std::vector<int>& subspace);

/// Mean probability of reaching U_target|i> from |i> through `channel`,
/// averaged over the listed basis inputs.
double population_fidelity(const std::function<Operator(const Operator&)>& channel, const Operator& u_target,
                           const std::vector<int>& inputs);

/// Basis inputs whose electron projection the ideal gate flips (population
/// of the flipped state above 0.5).
std::vector<int> flipped_inputs(const Operator& u_target, const StateSpace& space);

/// Spectral fidelity estimator: minus the ratio of the line's signed peak
/// after the gate to the same peak in the reference spectrum.
double peak_ratio(const SequenceProgram& gate, const RegisterSpec& spec, const BasisState& line,
                  const RelaxationModel& model, const RamseyParams& readout, Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Sweeps and nutation

struct SweepSegment {
  double from_MHz = 0.0;  // inclusive
  double to_MHz = 0.0;    // exclusive
  double rabi_MHz = 0.0;
};

struct SweepParams {
  std::vector<double> carriers_MHz;
  Manifold frame = Manifold::minus_one;
  std::optional<double> rabi_MHz;     // empty: ideal pulses
  std::vector<SweepSegment> segments;  // per-range calibration; overrides rabi_MHz
  /// Free delay; defaults to 1/(2|A|).
  std::optional<double> tau_us;
  RelaxationModel model;
};

/// P(m_S = 0) after (pi/2)_x - tau - (pi/2)_y on the optically pumped state,
/// one point per carrier.
ExperimentResult offset_sweep(const RegisterSpec& spec, const SweepParams& params,
                              Execution exec = Execution::parallel);

/// 1/2 - sin(pi nu / A)/6.
double eq9_population(double nu_MHz, double a_MHz);

std::vector<double> linspace(double from, double to, int steps);

struct NutationParams {
  TransferKind transfer = TransferKind::pulsed;
  double rf_rabi_kHz = 8.2;
  std::optional<double> rf_carrier_MHz;  // default: |0,0> <-> |0,-1> resonance
  std::vector<double> t_grid_ms;
  RelaxationModel model;
  StandardParams pulses;  // transfer pulse powers
};

/// Transfer - RF(t) - transfer, P(m_S = 0) versus RF duration in ms.
ExperimentResult rabi_nutation(const RegisterSpec& spec, const NutationParams& params,
                               Execution exec = Execution::parallel);

}  // namespace nvsim
