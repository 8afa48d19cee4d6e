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

#include "nvsim/observe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nvsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPeakMedianFactor = 3.0;
// Window sidelobes of strong lines sit above 3x the median; they are
// rejected with a floor relative to the strongest line.
constexpr double kPeakRelativeFloor = 0.1;

Pulse mw(double carrier, std::optional<double> rabi, double flip, double phase) {
  Pulse p;
  p.carrier_MHz = carrier;
  p.rabi_MHz = rabi;
  p.flip_deg = flip;
  p.phase_deg = phase;
  return p;
}

Operator conjugate(const Operator& u, const Operator& rho) {
  Operator out = u * rho * u.adjoint();
  return 0.5 * (out + out.adjoint());
}

double population(const Operator& projector, const Operator& rho) { return (projector * rho).trace().real(); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

FrameSpec readout_frame(const RegisterSpec& spec, Manifold manifold, double detuning) {
  if (manifold == Manifold::full) throw std::invalid_argument("ramsey readout needs a two-level manifold");
  FrameSpec f;
  f.subspace = manifold;
  f.carrier_mw_MHz = manifold_center_MHz(spec, manifold) - detuning;
  return f;
}

// Per-member Ramsey trace: rho_prep -> (pi/2)_x -> delay(t) -> (pi/2)_-x.
std::vector<double> member_trace(const SequenceProgram& prep, const RegisterSpec& spec, const FrameSpec& frame,
                                 const EnsembleMember& member, const RamseyParams& params, std::size_t n,
                                 Execution exec) {
  const Operator p0 = ms0_projector(spec, frame);
  Operator rho = initial_state(spec, frame);
  if (!prep.elements.empty()) {
    SequenceProgram reframed{prep.name, frame, prep.elements};
    rho = SequenceChannel(reframed, spec, member.model, member.shift_MHz).apply(rho);
  }
  const double c = frame.carrier_mw_MHz;
  SequenceProgram first{"readout1", frame, {mw(c, params.rabi_MHz, 90.0, 0.0)}};
  SequenceProgram last{"readout2", frame, {mw(c, params.rabi_MHz, 90.0, 180.0)}};
  rho = SequenceChannel(first, spec, member.model, member.shift_MHz).apply(rho);
  const SequenceChannel readout(last, spec, member.model, member.shift_MHz);

  const Operator h = rotating_hamiltonian(spec, frame) + member.shift_MHz * electron_sz(spec, frame);
  std::vector<double> out(n);
  const auto collapse = collapse_operators(spec, frame, member.model, true);
  if (collapse.empty()) {
    const mat::HermitianPropagator free(h);
    for_each_index(n, exec, [&](std::size_t k) {
      out[k] = population(p0, readout.apply(conjugate(free.at(static_cast<double>(k) * params.dt_us), rho)));
    });
    return out;
  }
  // Lindblad delays: step the state with one superoperator, then read out.
  const Operator step = lindblad_superoperator(h, collapse, params.dt_us);
  std::vector<Operator> states(n);
  states[0] = rho;
  for (std::size_t k = 1; k < n; ++k) states[k] = apply_superoperator(step, states[k - 1]);
  for_each_index(n, exec, [&](std::size_t k) { out[k] = population(p0, readout.apply(states[k])); });
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Direct DFT of `signal` at an arbitrary frequency.
Complex dft_at(const std::vector<double>& signal, double mean, double dt, double f) {
  Complex acc = 0.0;
  for (std::size_t t = 0; t < signal.size(); ++t)
    acc += (signal[t] - mean) * std::polar(1.0, -mat::kTwoPi * f * static_cast<double>(t) * dt);
  return acc;
}

}  // namespace

void ExperimentResult::validate() const {
  if (axis.points.size() != values.size())
    throw std::logic_error("ExperimentResult: axis and values differ in length");
  if (value_unit == "population")
    for (double v : values)
      if (v < -1e-9 || v > 1.0 + 1e-9) throw std::logic_error("ExperimentResult: population outside [0, 1]");
}

std::string spec_hash(const RegisterSpec& s) {
  const double fields[] = {s.field_mT, s.zfs_MHz, s.quadrupole_MHz, s.hyperfine_MHz, s.gamma_e_MHz_per_mT,
                           s.gamma_n14_kHz_per_mT, s.carbon_present ? 1.0 : 0.0, s.azz_kHz, s.azx_kHz,
                           s.gamma_c13_kHz_per_mT, s.t1_e_ms, s.t2s_e_us, s.t2s_n_ms};
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (double f : fields)
    for (char ch : format_double(f) + ";") h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Ramsey

ExperimentResult ramsey_trace(const SequenceProgram& prep, const RegisterSpec& spec, const RelaxationModel& model,
                              const RamseyParams& params, Execution exec) {
  if (!(params.dt_us > 0.0) || !(params.t_max_us > params.dt_us))
    throw std::invalid_argument("ramsey: need 0 < dt < t_max");
  const Manifold manifold = prep.elements.empty() ? params.manifold : prep.frame.subspace;
  const FrameSpec frame = readout_frame(spec, manifold, params.detuning_MHz);
  const std::size_t n = static_cast<std::size_t>(std::floor(params.t_max_us / params.dt_us + 1e-9)) + 1;

  const auto members = ensemble_members(model);
  std::vector<std::vector<double>> traces(members.size());
  for (std::size_t m = 0; m < members.size(); ++m)
    traces[m] = member_trace(prep, spec, frame, members[m], params, n, exec);

  ExperimentResult out;
  out.axis = {"t", "us", {}};
  out.value_name = "P(ms=0)";
  out.value_unit = "population";
  out.values.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out.axis.points.push_back(static_cast<double>(k) * params.dt_us);
    for (std::size_t m = 0; m < members.size(); ++m) out.values[k] += members[m].weight * traces[m][k];
  }
  out.metadata = {{"program", prep.elements.empty() ? "reference" : prep.name},
                  {"spec_hash", spec_hash(spec)},
                  {"relaxation", to_string(model.mode)},
                  {"manifold", to_string(manifold)},
                  {"carrier_MHz", format_double(frame.carrier_mw_MHz)}};
  return out;
}

ExperimentResult ramsey_spectrum(const SequenceProgram& prep, const RegisterSpec& spec,
                                 const RelaxationModel& model, const RamseyParams& params, Execution exec) {
  // Every line must sit inside the band: offsets reach detuning + max splitting.
  const Manifold manifold = prep.elements.empty() ? params.manifold : prep.frame.subspace;
  double max_offset = 0.0;
  for (int mi : {-1, 0, 1})
    for (int mc2 : spec.carbon_present ? std::vector<int>{1, -1} : std::vector<int>{0})
      max_offset = std::max(max_offset, std::abs(params.detuning_MHz +
                                                 esr_line_offset_MHz(spec, manifold, {0, mi, mc2})));
  if (params.dt_us > 1.0 / (4.0 * max_offset))
    throw std::invalid_argument("ramsey_spectrum: dt too coarse to resolve the band (need dt <= 1/(4 max offset))");

  const ExperimentResult trace = ramsey_trace(prep, spec, model, params, exec);
  const double dt = params.dt_us;
  const std::size_t n = trace.values.size();
  double mean = 0.0;
  for (double v : trace.values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> signal(n);
  double window_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w =
        params.apodize ? 0.5 * (1.0 - std::cos(mat::kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1)))
                       : 1.0;
    signal[k] = (trace.values[k] - mean) * w;
    window_sum += w;
  }

  const mat::Spectrum spectrum = mat::dft(signal, dt, params.zero_fill, exec);
  // Finite readout pulses add ~4 t_p / pi of effective free precession.
  const double t0 = params.rabi_MHz ? 4.0 * (1.0 / (4.0 * *params.rabi_MHz)) / kPi : 0.0;

  std::vector<double> axis, magnitude;
  std::vector<Complex> corrected;
  for (std::size_t j = 0; j < spectrum.freq_mhz.size(); ++j) {
    const double f = spectrum.freq_mhz[j];
    if (f <= 0.0) continue;
    const Complex v = spectrum.values[j] * std::polar(1.0, -mat::kTwoPi * f * t0);
    corrected.push_back(v);
    axis.push_back(f - params.detuning_MHz);
    magnitude.push_back(std::abs(v));
  }
  std::vector<double> real(corrected.size());
  for (std::size_t j = 0; j < corrected.size(); ++j) real[j] = corrected[j].real();
  std::vector<Peak> peaks = pick_peaks(axis, real, magnitude);

  // Re-evaluate each line exactly at its interpolated frequency, which
  // removes the off-bin phase of the finite window; the zero-order phase is
  // half the argument of the summed squares, so line signs do not affect it.
  const double norm = 2.0 / window_sum;
  std::vector<Complex> at_peak;
  Complex sum_sq = 0.0;
  for (const Peak& p : peaks) {
    const double f = p.position + params.detuning_MHz;
    at_peak.push_back(norm * dft_at(signal, 0.0, dt, f) * std::polar(1.0, -mat::kTwoPi * f * t0));
    sum_sq += at_peak.back() * at_peak.back();
  }
  const double phi0 = 0.5 * std::arg(sum_sq);  // in (-pi/2, pi/2]
  const Complex rot = std::polar(1.0, -phi0);
  for (std::size_t j = 0; j < corrected.size(); ++j) real[j] = (corrected[j] * rot).real();
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    peaks[i].amplitude = (at_peak[i] * rot).real();
    peaks[i].magnitude = std::abs(at_peak[i]);
  }

  ExperimentResult out;
  out.axis = {"offset", "MHz", axis};
  out.value_name = "spectrum";
  out.value_unit = "arb";
  out.values = real;
  out.peaks = std::move(peaks);
  out.metadata = trace.metadata;
  out.metadata["bin_width_MHz"] = format_double(spectrum.bin_width_mhz);
  out.metadata["nyquist_MHz"] = format_double(spectrum.nyquist_mhz);
  out.metadata["zero_order_phase_rad"] = format_double(phi0);
  return out;
}

std::vector<Peak> pick_peaks(const std::vector<double>& axis, const std::vector<double>& values,
                             const std::vector<double>& magnitudes) {
  std::vector<Peak> out;
  const std::size_t n = magnitudes.size();
  if (n < 3 || axis.size() != n || values.size() != n) return out;
  const double med = median(magnitudes);
  const double top = *std::max_element(magnitudes.begin(), magnitudes.end());
  const double threshold = std::max(kPeakMedianFactor * med, kPeakRelativeFloor * top);
  if (!(top > 0.0)) return out;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double y0 = magnitudes[j - 1], y1 = magnitudes[j], y2 = magnitudes[j + 1];
    if (!(y1 > y0 && y1 >= y2 && y1 > threshold)) continue;
    const double denom = y0 - 2.0 * y1 + y2;
    const double shift = denom != 0.0 ? std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5) : 0.0;
    const double step = axis[j + 1] - axis[j];
    out.push_back({axis[j] + shift * step, values[j], y1 - 0.25 * (y0 - y2) * shift});
  }
  return out;
}

double esr_line_offset_MHz(const RegisterSpec& spec, Manifold manifold, const BasisState& ground) {
  if (manifold == Manifold::full) throw std::invalid_argument("esr_line_offset: two-level manifold required");
  FrameSpec frame;
  frame.subspace = manifold;
  frame.carrier_mw_MHz = manifold_center_MHz(spec, manifold);
  const StateSpace space = state_space(spec, frame);
  const int m = manifold == Manifold::minus_one ? -1 : 1;
  const int a = space.index({0, ground.mi, ground.mc2});
  const int b = space.index({m, ground.mi, ground.mc2});
  if (a < 0 || b < 0) throw std::invalid_argument("esr_line_offset: state not in manifold");
  const Operator h = rotating_hamiltonian(spec, frame);
  return (h(a, a) - h(b, b)).real();
}

// ---------------------------------------------------------------------------
// Truth tables and fidelities

TruthTable truth_table(const Operator& u, const std::vector<std::string>& labels) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != labels.size())
    throw std::invalid_argument("truth_table: labels do not match the operator dimension");
  if (!mat::is_unitary(u)) throw std::invalid_argument("truth_table: operator is not unitary");
  TruthTable table;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index best = 0;
    double best_p = -1.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double p = std::norm(u(i, j));
      if (p > best_p + 1e-12) best = i, best_p = p;
    }
    bool tie = false;
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      if (i != best && std::abs(std::norm(u(i, j)) - best_p) <= 1e-9) tie = true;
    table.rows.push_back({labels[j], labels[best], std::clamp(best_p, 0.0, 1.0), tie});
  }
  return table;
}

EmbeddedGate embed_electron_carbon(const Operator& u_subspace, const RegisterSpec& spec, Manifold manifold,
                                   int mi) {
  if (!spec.carbon_present) throw std::invalid_argument("embed_electron_carbon: register has no 13C");
  if (manifold == Manifold::full) throw std::invalid_argument("embed_electron_carbon: two-level manifold required");
  const StateSpace sub(manifold, true);
  if (u_subspace.rows() != sub.dim()) throw std::invalid_argument("embed_electron_carbon: dimension mismatch");

  const int levels[] = {1, 0, -1};
  const int carbons[] = {1, -1};
  EmbeddedGate out;
  out.u = Operator::Identity(6, 6);
  for (int e : levels)
    for (int c : carbons) out.labels.push_back(std::to_string(e) + (c > 0 ? " up" : " down"));
  auto row = [](int e, int c) { return (1 - e) * 2 + (c > 0 ? 0 : 1); };
  for (int ej : sub.electron_levels())
    for (int cj : carbons) {
      out.u(row(ej, cj), row(ej, cj)) = 0.0;
      for (int ei : sub.electron_levels())
        for (int ci : carbons)
          out.u(row(ei, ci), row(ej, cj)) = u_subspace(sub.index({ei, mi, ci}), sub.index({ej, mi, cj}));
    }
  return out;
}

double process_fidelity(const Operator& u_actual, const Operator& u_target, const std::vector<int>& subspace) {
  if (u_actual.rows() != u_target.rows() || u_actual.cols() != u_target.cols())
    throw std::invalid_argument("process_fidelity: dimension mismatch");
  if (subspace.empty()) throw std::invalid_argument("process_fidelity: empty subspace");
  const Operator a = mat::restrict(u_actual, subspace);
  const Operator t = mat::restrict(u_target, subspace);
  return std::min(1.0, std::abs((t.adjoint() * a).trace()) / static_cast<double>(subspace.size()));
}

double population_fidelity(const std::function<Operator(const Operator&)>& channel, const Operator& u_target,
                           const std::vector<int>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("population_fidelity: no inputs");
  const Eigen::Index n = u_target.rows();
  double total = 0.0;
  for (int i : inputs) {
    Operator rho = Operator::Zero(n, n);
    rho(i, i) = 1.0;
    const Operator out = channel(rho);
    if (out.rows() != n) throw std::invalid_argument("population_fidelity: dimension mismatch");
    const Eigen::VectorXcd psi = u_target.col(i);
    total += (psi.adjoint() * out * psi)(0, 0).real();
  }
  return std::clamp(total / static_cast<double>(inputs.size()), 0.0, 1.0);
}

std::vector<int> flipped_inputs(const Operator& u_target, const StateSpace& space) {
  std::vector<int> out;
  for (int j = 0; j < space.dim(); ++j) {
    const BasisState s = space.state(j);
    double flipped = 0.0;
    for (int i = 0; i < space.dim(); ++i)
      if (space.state(i).ms != s.ms) flipped += std::norm(u_target(i, j));
    if (flipped > 0.5) out.push_back(j);
  }
  return out;
}

double peak_ratio(const SequenceProgram& gate, const RegisterSpec& spec, const BasisState& line,
                  const RelaxationModel& model, const RamseyParams& readout, Execution exec) {
  RamseyParams params = readout;
  params.manifold = gate.frame.subspace;
  const double x = esr_line_offset_MHz(spec, gate.frame.subspace, line);
  const ExperimentResult ref = ramsey_spectrum(SequenceProgram{"reference", gate.frame, {}}, spec, model, params, exec);
  const ExperimentResult after = ramsey_spectrum(gate, spec, model, params, exec);
  const double tol = 2.0 * std::stod(ref.metadata.at("bin_width_MHz"));

  auto nearest = [&](const ExperimentResult& r) -> std::optional<Peak> {
    std::optional<Peak> best;
    for (const auto& p : r.peaks)
      if (std::abs(p.position - x) <= tol && (!best || std::abs(p.position - x) < std::abs(best->position - x)))
        best = p;
    return best;
  };
  const auto ref_peak = nearest(ref);
  if (!ref_peak) throw std::runtime_error("peak_ratio: reference line not found in the spectrum");
  const auto after_peak = nearest(after);
  if (!after_peak) return 0.0;
  return -after_peak->amplitude / ref_peak->amplitude;
}

// ---------------------------------------------------------------------------
// Sweeps

double eq9_population(double nu_MHz, double a_MHz) { return 0.5 - std::sin(kPi * nu_MHz / a_MHz) / 6.0; }

std::vector<double> linspace(double from, double to, int steps) {
  if (steps < 1) throw std::invalid_argument("linspace: steps must be >= 1");
  if (steps == 1) return {from};
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) out[i] = from + (to - from) * static_cast<double>(i) / (steps - 1);
  return out;
}

ExperimentResult offset_sweep(const RegisterSpec& spec, const SweepParams& params, Execution exec) {
  if (params.carriers_MHz.empty()) throw std::invalid_argument("offset_sweep: empty carrier grid");
  spec.validate();
  const double tau = params.tau_us.value_or(1.0 / (2.0 * std::abs(spec.hyperfine_MHz)));
  const auto members = ensemble_members(params.model);

  auto rabi_for = [&](double carrier) -> std::optional<double> {
    for (const auto& seg : params.segments)
      if (carrier >= seg.from_MHz && carrier < seg.to_MHz) return seg.rabi_MHz;
    if (!params.segments.empty()) throw std::invalid_argument("offset_sweep: carrier outside every segment");
    return params.rabi_MHz;
  };

  std::vector<double> values(params.carriers_MHz.size());
  for_each_index(values.size(), exec, [&](std::size_t k) {
    const double c = params.carriers_MHz[k];
    const auto rabi = rabi_for(c);
    SequenceProgram prog;
    prog.name = "offset_sweep";
    prog.frame.subspace = params.frame;
    prog.frame.carrier_mw_MHz = c;
    prog.elements = {mw(c, rabi, 90.0, 0.0), Delay{tau}, mw(c, rabi, 90.0, 90.0)};
    const Operator rho0 = initial_state(spec, prog.frame);
    const Operator p0 = ms0_projector(spec, prog.frame);
    double acc = 0.0;
    for (const auto& m : members)
      acc += m.weight * population(p0, SequenceChannel(prog, spec, m.model, m.shift_MHz).apply(rho0));
    values[k] = acc;
  });

  ExperimentResult out;
  out.axis = {"carrier", "MHz", params.carriers_MHz};
  out.value_name = "P(ms=0)";
  out.value_unit = "population";
  out.values = std::move(values);
  out.metadata = {{"program", "offset_sweep"},
                  {"spec_hash", spec_hash(spec)},
                  {"relaxation", to_string(params.model.mode)},
                  {"frame", to_string(params.frame)},
                  {"pulses", params.rabi_MHz || !params.segments.empty() ? "finite" : "ideal"},
                  {"tau_us", format_double(tau)}};
  return out;
}

// ---------------------------------------------------------------------------
// Rabi nutation

ExperimentResult rabi_nutation(const RegisterSpec& spec, const NutationParams& params, Execution exec) {
  if (params.t_grid_ms.empty()) throw std::invalid_argument("rabi_nutation: empty time grid");
  if (!(params.rf_rabi_kHz > 0.0)) throw std::invalid_argument("rabi_nutation: RF Rabi frequency must be positive");
  for (double t : params.t_grid_ms)
    if (t < 0.0) throw std::invalid_argument("rabi_nutation: negative RF duration");

  StandardParams pulses = params.pulses;
  pulses.transfer = params.transfer;
  pulses.carrier_MHz.reset();
  const SequenceProgram transfer = build_standard_sequence(
      params.transfer == TransferKind::pulsed ? StandardKind::transfer_pulsed : StandardKind::transfer_selective,
      spec, pulses);

  // Resolve the addressed 14N transition of the m_S = 0 or transfer manifold.
  const StateSpace space = state_space(spec, transfer.frame);
  const int rep_c = spec.carbon_present ? 1 : 0;
  NmrTarget target{0, 0, -1};
  double f_target = std::abs(transition_energy_MHz(spec, {0, 0, rep_c}, {0, -1, rep_c}));
  if (params.rf_carrier_MHz) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : transition_frequencies(spec, Channel::nmr14)) {
      if (space.index({t.a.ms, t.a.mi, t.a.mc2}) < 0 || t.a.mc2 < 0) continue;
      const double miss = std::abs(t.freq_MHz - *params.rf_carrier_MHz);
      if (miss < best) best = miss, target = {t.a.ms, t.a.mi, t.b.mi}, f_target = t.freq_MHz;
    }
    if (best > 0.1)
      throw std::invalid_argument("rabi_nutation: RF carrier is more than 100 kHz from every 14N transition");
  }
  const double rf_carrier = params.rf_carrier_MHz.value_or(f_target);

  const auto members = ensemble_members(params.model);
  const Operator rho0 = initial_state(spec, transfer.frame);
  const Operator p0 = ms0_projector(spec, transfer.frame);
  const std::size_t n = params.t_grid_ms.size();
  std::vector<std::vector<double>> traces(members.size(), std::vector<double>(n));

  for (std::size_t m = 0; m < members.size(); ++m) {
    const SequenceChannel transfer_map(transfer, spec, members[m].model, members[m].shift_MHz);
    const Operator rho1 = transfer_map.apply(rho0);
    for_each_index(n, exec, [&](std::size_t k) {
      Operator rho = rho1;
      const double t_us = params.t_grid_ms[k] * 1e3;
      if (t_us > 0.0) {
        Pulse rf;
        rf.channel = DriveChannel::rf;
        rf.carrier_MHz = rf_carrier;
        rf.rabi_MHz = params.rf_rabi_kHz * 1e-3;
        rf.flip_deg = 360.0 * *rf.rabi_MHz * t_us;
        rf.target = target;
        const SequenceProgram rf_prog{"rf", transfer.frame, {rf}};
        rho = SequenceChannel(rf_prog, spec, members[m].model, members[m].shift_MHz).apply(rho);
      }
      traces[m][k] = population(p0, transfer_map.apply(rho));
    });
  }

  ExperimentResult out;
  out.axis = {"t_rf", "ms", params.t_grid_ms};
  out.value_name = "P(ms=0)";
  out.value_unit = "population";
  out.values.assign(n, 0.0);
  for (std::size_t m = 0; m < members.size(); ++m)
    for (std::size_t k = 0; k < n; ++k) out.values[k] += members[m].weight * traces[m][k];
  out.metadata = {{"program", "rabi_nutation"},
                  {"spec_hash", spec_hash(spec)},
                  {"relaxation", to_string(params.model.mode)},
                  {"transfer", params.transfer == TransferKind::pulsed ? "pulsed" : "selective"},
                  {"rf_carrier_MHz", format_double(rf_carrier)},
                  {"rf_rabi_kHz", format_double(params.rf_rabi_kHz)}};
  return out;
}

}  // namespace nvsim
