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

#include "nvsim/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nvsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;
constexpr double kMwWindowFullMHz = 500.0;
constexpr double kRfSearchWindowMHz = 0.5;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Operator diagonal_phase(const Operator& k, double t_us) {
  // exp(-i 2 pi K t) for diagonal K.
  Operator out = Operator::Zero(k.rows(), k.cols());
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    out(i, i) = std::polar(1.0, -mat::kTwoPi * k(i, i).real() * t_us);
  return out;
}

Operator rotation(const Operator& x, const Operator& y, double flip_deg, double phase_deg) {
  const Operator axis = std::cos(phase_deg * kDeg) * x + std::sin(phase_deg * kDeg) * y;
  // exp(-i theta axis / 2) == propagator_exp(axis / 2, theta / 2pi).
  return mat::propagator_exp(0.5 * axis, flip_deg * kDeg / mat::kTwoPi);
}

struct RfFrame {
  Operator x, y;
  Operator shift;  // c P_b
};

// Transition-framed RF drive in the doubly rotating frame. The pulse is
// evolved in a frame where a and b are degenerate on resonance; the diagonal
// shift c P_b returns the state to the sequence frame afterwards.
RfFrame rf_frame(const RegisterSpec& spec, const FrameSpec& frame, const Operator& h_frame,
                 const Pulse& pulse, NmrTarget target) {
  const StateSpace space = state_space(spec, frame);
  const int rep_c = spec.carbon_present ? 1 : 0;
  BasisState a{target.ms, target.mi_a, rep_c}, b{target.ms, target.mi_b, rep_c};
  if (space.index(a) < 0 || space.index(b) < 0)
    throw std::invalid_argument("rf pulse: target transition is outside the frame's state space");
  double f_ab = transition_energy_MHz(spec, a, b);
  if (f_ab < 0.0) {
    std::swap(a, b);
    std::swap(target.mi_a, target.mi_b);
    f_ab = -f_ab;
  }
  const double delta_rot = (h_frame(space.index(b), space.index(b)) - h_frame(space.index(a), space.index(a))).real();
  const double c = pulse.carrier_MHz - f_ab + delta_rot;

  const int dim = space.dim();
  RfFrame out{Operator::Zero(dim, dim), Operator::Zero(dim, dim), Operator::Zero(dim, dim)};
  for (int mc2 : spec.carbon_present ? std::vector<int>{1, -1} : std::vector<int>{0}) {
    const int ia = space.index({target.ms, target.mi_a, mc2});
    const int ib = space.index({target.ms, target.mi_b, mc2});
    out.x(ib, ia) = 1.0;
    out.x(ia, ib) = 1.0;
    out.y(ib, ia) = Complex(0.0, -1.0);
    out.y(ia, ib) = Complex(0.0, 1.0);
    out.shift(ib, ib) = c;
  }
  return out;
}

NmrTarget infer_rf_target(const RegisterSpec& spec, const FrameSpec& frame, double carrier_MHz) {
  const StateSpace space = state_space(spec, frame);
  double best = std::numeric_limits<double>::infinity();
  NmrTarget target;
  for (const auto& t : transition_frequencies(spec, Channel::nmr14)) {
    if (space.index({t.a.ms, 0, spec.carbon_present ? 1 : 0}) < 0) continue;
    if (t.a.mc2 < 0) continue;
    const double miss = std::abs(t.freq_MHz - carrier_MHz);
    if (miss < best) best = miss, target = NmrTarget{t.a.ms, t.a.mi, t.b.mi};
  }
  if (best > kRfSearchWindowMHz)
    throw std::invalid_argument("rf pulse: carrier " + std::to_string(carrier_MHz) +
                                " MHz is not near any 14N transition of the frame");
  return target;
}

void check_mw_carrier(const RegisterSpec& spec, const FrameSpec& frame, double carrier) {
  const double centre = manifold_center_MHz(spec, frame.subspace);
  const double window = frame.subspace == Manifold::full ? kMwWindowFullMHz : 50.0;
  if (std::abs(carrier - centre) > window)
    throw std::invalid_argument("mw pulse: carrier " + std::to_string(carrier) +
                                " MHz outside the validity window of the " + to_string(frame.subspace) +
                                " frame");
}

}  // namespace

// ---------------------------------------------------------------------------

void SequenceProgram::validate() const {
  if (elements.empty()) throw std::invalid_argument("program '" + name + "' is empty");
  for (const auto& el : elements) {
    std::visit(overloaded{
                   [&](const Pulse& p) {
                     if (p.rabi_MHz && !(*p.rabi_MHz > 0.0))
                       throw std::invalid_argument("pulse rabi frequency must be positive");
                     if (!(p.flip_deg > 0.0))
                       throw std::invalid_argument("pulse flip angle must be positive");
                     // RF nutation scans run through many turns; MW pulses stay in (0, 360].
                     if (p.channel == DriveChannel::mw && p.flip_deg > 360.0)
                       throw std::invalid_argument("mw flip angle must be in (0, 360] deg");
                   },
                   [&](const Delay& d) {
                     if (d.duration_us < 0.0) throw std::invalid_argument("delay must be non-negative");
                   }},
               el);
  }
}

double total_duration(const SequenceProgram& prog) {
  double total = 0.0;
  for (const auto& el : prog.elements)
    total += std::visit(overloaded{[](const Pulse& p) { return p.duration_us(); },
                                   [](const Delay& d) { return d.duration_us; }},
                        el);
  return total;
}

SequenceProgram concat(const SequenceProgram& first, const SequenceProgram& second) {
  SequenceProgram out = first;
  out.name = first.name + "+" + second.name;
  out.elements.insert(out.elements.end(), second.elements.begin(), second.elements.end());
  return out;
}

SequenceProgram inverse(const SequenceProgram& prog) {
  SequenceProgram out;
  out.name = prog.name + "^-1";
  out.frame = prog.frame;
  for (auto it = prog.elements.rbegin(); it != prog.elements.rend(); ++it) {
    const auto* pulse = std::get_if<Pulse>(&*it);
    if (!pulse) throw std::invalid_argument("inverse: delays cannot be time-reversed");
    Pulse p = *pulse;
    p.phase_deg = std::fmod(p.phase_deg + 180.0, 360.0);
    out.elements.emplace_back(p);
  }
  return out;
}

Operator Segment::unitary() const {
  if (instantaneous) return *instantaneous;
  return frame_kick * mat::propagator_exp(generator, duration_us) * pre_kick;
}

std::vector<Segment> compile_segments(const SequenceProgram& prog, const RegisterSpec& spec,
                                      std::vector<std::string>* warnings) {
  prog.validate();
  const Operator h_frame = rotating_hamiltonian(spec, prog.frame);
  const int dim = static_cast<int>(h_frame.rows());
  const DriveOperators mw = mw_drive_operators(spec, prog.frame);
  const Operator one = mat::identity(dim);

  std::vector<Segment> out;
  out.reserve(prog.elements.size());
  double elapsed = 0.0;
  // Pulse frame = program frame - offset; convert at the absolute start/end times.
  auto convert = [&](Segment& seg, const Operator& offset) {
    if (seg.instantaneous) {
      const Operator v = diagonal_phase(offset, elapsed);
      seg.instantaneous = v * *seg.instantaneous * v.adjoint();
    } else {
      seg.pre_kick = diagonal_phase(offset, -elapsed);
      seg.frame_kick = diagonal_phase(offset, elapsed + seg.duration_us);
    }
  };
  for (const auto& el : prog.elements) {
    Segment seg;
    seg.pre_kick = one;
    seg.frame_kick = one;
    if (const auto* d = std::get_if<Delay>(&el)) {
      seg.kind = Segment::Kind::delay;
      seg.generator = h_frame;
      seg.duration_us = d->duration_us;
      elapsed += seg.duration_us;
      out.push_back(std::move(seg));
      continue;
    }
    const Pulse& p = std::get<Pulse>(el);
    if (p.rabi_MHz && *p.rabi_MHz > 0.2 * std::abs(p.carrier_MHz) && warnings)
      warnings->push_back("rotating-wave approximation questionable: rabi " + std::to_string(*p.rabi_MHz) +
                          " MHz exceeds 0.2 x carrier " + std::to_string(p.carrier_MHz) + " MHz");

    if (p.channel == DriveChannel::mw) {
      seg.kind = Segment::Kind::mw_pulse;
      check_mw_carrier(spec, prog.frame, p.carrier_MHz);
      FrameSpec pulse_frame = prog.frame;
      pulse_frame.carrier_mw_MHz = p.carrier_MHz;
      const Operator h_pulse = rotating_hamiltonian(spec, pulse_frame);
      if (p.ideal()) {
        // An infinitely strong spin-1 pulse would rotate both transitions;
        // ideal pulses address only the ESR line nearest the carrier.
        if (prog.frame.subspace == Manifold::full) {
          const bool lower = std::abs(p.carrier_MHz - manifold_center_MHz(spec, Manifold::minus_one)) <=
                             std::abs(p.carrier_MHz - manifold_center_MHz(spec, Manifold::plus_one));
          const DriveOperators one_line = mw_drive_operators(spec, prog.frame, lower ? -1 : 1);
          seg.instantaneous = rotation(one_line.x, one_line.y, p.flip_deg, p.phase_deg);
        } else {
          seg.instantaneous = rotation(mw.x, mw.y, p.flip_deg, p.phase_deg);
        }
      } else {
        const double phi = p.phase_deg * kDeg;
        seg.generator = h_pulse + 0.5 * *p.rabi_MHz * (std::cos(phi) * mw.x + std::sin(phi) * mw.y);
        seg.duration_us = p.duration_us();
      }
      if (p.carrier_MHz != prog.frame.carrier_mw_MHz) convert(seg, h_frame - h_pulse);
    } else {
      seg.kind = Segment::Kind::rf_pulse;
      const NmrTarget target = p.target ? *p.target : infer_rf_target(spec, prog.frame, p.carrier_MHz);
      const RfFrame rf = rf_frame(spec, prog.frame, h_frame, p, target);
      if (p.ideal()) {
        seg.instantaneous = rotation(rf.x, rf.y, p.flip_deg, p.phase_deg);
      } else {
        const double phi = p.phase_deg * kDeg;
        seg.generator = h_frame - rf.shift + 0.5 * *p.rabi_MHz * (std::cos(phi) * rf.x + std::sin(phi) * rf.y);
        seg.duration_us = p.duration_us();
      }
      convert(seg, rf.shift);
    }
    elapsed += seg.duration_us;
    out.push_back(std::move(seg));
  }
  return out;
}

Operator sequence_propagator(const SequenceProgram& prog, const RegisterSpec& spec,
                             std::vector<std::string>* warnings) {
  const auto segments = compile_segments(prog, spec, warnings);
  Operator u = mat::identity(static_cast<int>(rotating_hamiltonian(spec, prog.frame).rows()));
  for (const auto& seg : segments) u = seg.unitary() * u;
  return u;
}

Operator closed_form_gate(double nu_MHz, double a_eff_MHz, double tau_us) {
  if (tau_us < 0.0) throw std::invalid_argument("closed_form_gate: tau must be non-negative");
  const Complex i(0.0, 1.0);
  Operator sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, -i, i, 0.0;
  sz << 1.0, 0.0, 0.0, -1.0;
  const Operator e2 = mat::identity(2), e3 = mat::identity(3);
  Operator iz = Operator::Zero(3, 3);
  iz(0, 0) = 1.0;
  iz(2, 2) = -1.0;

  const double c_plus = std::cos(kPi * nu_MHz * tau_us + kPi / 4.0);
  const double c_minus = std::cos(kPi * nu_MHz * tau_us - kPi / 4.0);
  const double theta = kPi * a_eff_MHz * tau_us;
  const double r2 = std::sqrt(2.0);

  const Operator flip = c_minus * (sz - i * e2) + c_plus * (sx + sy);
  const Operator keep = c_plus * (sz - i * e2) - c_minus * (sx + sy);
  return (-i / r2) * mat::kron(flip, std::sin(theta) * iz) +
         (i / r2) * mat::kron(keep, (std::cos(theta) - 1.0) * iz * iz + e3);
}

// ---------------------------------------------------------------------------
// Standard programs

StandardKind standard_kind_from_string(const std::string& s) {
  if (s == "U1" || s == "u1") return StandardKind::u1;
  if (s == "U2" || s == "u2") return StandardKind::u2;
  if (s == "CNOT1_13C" || s == "cnot1_13c") return StandardKind::cnot1_13c;
  if (s == "CNOT2_13C" || s == "cnot2_13c") return StandardKind::cnot2_13c;
  if (s == "transfer_pulsed") return StandardKind::transfer_pulsed;
  if (s == "transfer_selective") return StandardKind::transfer_selective;
  if (s == "ramsey_fid") return StandardKind::ramsey_fid;
  if (s == "rabi_nutation") return StandardKind::rabi_nutation;
  throw std::invalid_argument("unknown standard sequence '" + s + "'");
}

std::string to_string(StandardKind k) {
  switch (k) {
    case StandardKind::u1: return "U1";
    case StandardKind::u2: return "U2";
    case StandardKind::cnot1_13c: return "CNOT1_13C";
    case StandardKind::cnot2_13c: return "CNOT2_13C";
    case StandardKind::transfer_pulsed: return "transfer_pulsed";
    case StandardKind::transfer_selective: return "transfer_selective";
    case StandardKind::ramsey_fid: return "ramsey_fid";
    case StandardKind::rabi_nutation: return "rabi_nutation";
  }
  return "?";
}

namespace {

Pulse mw_pulse(double carrier, std::optional<double> rabi, double flip, double phase) {
  Pulse p;
  p.channel = DriveChannel::mw;
  p.carrier_MHz = carrier;
  p.rabi_MHz = rabi;
  p.flip_deg = flip;
  p.phase_deg = phase;
  return p;
}

// (pi/2)_x - tau - (pi/2)_phase at `carrier`.
SequenceProgram hard_gate(const std::string& name, Manifold manifold, double carrier, double tau,
                          std::optional<double> rabi, double second_phase, bool compensate) {
  if (compensate && rabi) {
    const double t_p = 1.0 / (4.0 * *rabi);
    tau = std::max(0.0, tau - 4.0 * t_p / kPi);
  }
  SequenceProgram prog;
  prog.name = name;
  prog.frame.subspace = manifold;
  prog.frame.carrier_mw_MHz = carrier;
  prog.elements = {mw_pulse(carrier, rabi, 90.0, 0.0), Delay{tau}, mw_pulse(carrier, rabi, 90.0, second_phase)};
  return prog;
}

}  // namespace

SequenceProgram build_standard_sequence(StandardKind kind, const RegisterSpec& spec,
                                        const StandardParams& params) {
  spec.validate();
  const double a = spec.hyperfine_MHz;
  const double centre = manifold_center_MHz(spec, Manifold::minus_one);
  const std::optional<double> hard =
      params.ideal_pulses ? std::nullopt : std::optional<double>(params.hard_rabi_MHz);
  auto carrier_or = [&](double fallback) { return params.carrier_MHz.value_or(fallback); };

  switch (kind) {
    case StandardKind::u1:
      return hard_gate("U1", Manifold::minus_one, carrier_or(centre - a / 2.0), 1.0 / (2.0 * std::abs(a)),
                       hard, 90.0, params.compensate_pulse_delay);
    case StandardKind::u2:
    case StandardKind::transfer_pulsed: {
      auto prog = hard_gate("U2", Manifold::minus_one, carrier_or(centre + a / 2.0),
                            1.0 / (2.0 * std::abs(a)), hard, 90.0, params.compensate_pulse_delay);
      if (kind == StandardKind::transfer_pulsed) prog.name = "transfer_pulsed";
      return prog;
    }
    case StandardKind::cnot1_13c:
    case StandardKind::cnot2_13c: {
      if (!spec.carbon_present) throw std::invalid_argument(to_string(kind) + " requires a 13C spin");
      if (spec.azz_kHz == 0.0) throw std::invalid_argument(to_string(kind) + " requires Azz != 0");
      const Manifold m = kind == StandardKind::cnot1_13c ? Manifold::minus_one : Manifold::plus_one;
      const double sign_m = m == Manifold::minus_one ? -1.0 : 1.0;
      // Centre the carrier on the 14N m_I = +1 doublet: nu + (-m) A = 0.
      const double nu = sign_m * a;
      const double carrier = carrier_or(manifold_center_MHz(spec, m) - nu);
      const double tau = 1.0 / (2.0 * std::abs(spec.azz_kHz * 1e-3));
      const std::optional<double> rabi =
          params.ideal_pulses ? std::nullopt : std::optional<double>(params.cnot13_rabi_MHz);
      // -y second pulse selects down (CNOT1) / up (CNOT2) as control state.
      return hard_gate(to_string(kind), m, carrier, tau, rabi, 270.0, params.compensate_pulse_delay);
    }
    case StandardKind::transfer_selective: {
      SequenceProgram prog;
      prog.name = "transfer_selective";
      prog.frame.subspace = Manifold::minus_one;
      prog.frame.carrier_mw_MHz = carrier_or(centre);
      prog.elements = {mw_pulse(prog.frame.carrier_mw_MHz, params.selective_rabi_MHz, 180.0, 0.0)};
      return prog;
    }
    case StandardKind::ramsey_fid: {
      SequenceProgram prog;
      prog.name = "ramsey_fid";
      prog.frame.subspace = Manifold::minus_one;
      prog.frame.carrier_mw_MHz = carrier_or(centre - params.ramsey_detuning_MHz);
      const double c = prog.frame.carrier_mw_MHz;
      prog.elements = {mw_pulse(c, hard, 90.0, 0.0), Delay{params.ramsey_delay_us}, mw_pulse(c, hard, 90.0, 0.0)};
      return prog;
    }
    case StandardKind::rabi_nutation: {
      StandardParams transfer_params = params;
      transfer_params.carrier_MHz.reset();
      const auto transfer = build_standard_sequence(
          params.transfer == TransferKind::pulsed ? StandardKind::transfer_pulsed : StandardKind::transfer_selective,
          spec, transfer_params);
      const NmrTarget target{0, 0, -1};
      const int rep_c = spec.carbon_present ? 1 : 0;
      const double f_nmr = std::abs(transition_energy_MHz(spec, {0, 0, rep_c}, {0, -1, rep_c}));

      SequenceProgram prog;
      prog.name = "rabi_nutation";
      prog.frame = transfer.frame;
      prog.frame.carrier_rf_MHz = params.rf_carrier_MHz.value_or(f_nmr);
      prog.elements = transfer.elements;
      if (params.rf_duration_us > 0.0) {
        Pulse rf;
        rf.channel = DriveChannel::rf;
        rf.carrier_MHz = prog.frame.carrier_rf_MHz;
        rf.rabi_MHz = params.rf_rabi_kHz * 1e-3;
        rf.flip_deg = 360.0 * *rf.rabi_MHz * params.rf_duration_us;
        rf.target = target;
        prog.elements.emplace_back(rf);
      }
      prog.elements.insert(prog.elements.end(), transfer.elements.begin(), transfer.elements.end());
      return prog;
    }
  }
  throw std::invalid_argument("unknown standard sequence kind");
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const SequenceProgram& prog) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& el : prog.elements) {
    if (const auto* d = std::get_if<Delay>(&el)) {
      elements.push_back({{"kind", "delay"}, {"duration_us", d->duration_us}});
      continue;
    }
    const Pulse& p = std::get<Pulse>(el);
    nlohmann::json j = {{"kind", "pulse"},
                        {"channel", p.channel == DriveChannel::mw ? "mw" : "rf"},
                        {"carrier_MHz", p.carrier_MHz},
                        {"phase_deg", p.phase_deg},
                        {"flip_deg", p.flip_deg},
                        {"rabi_MHz", p.rabi_MHz ? nlohmann::json(*p.rabi_MHz) : nlohmann::json("ideal")}};
    if (p.target) j["target"] = {{"ms", p.target->ms}, {"mi_a", p.target->mi_a}, {"mi_b", p.target->mi_b}};
    elements.push_back(std::move(j));
  }
  return {{"name", prog.name},
          {"frame",
           {{"carrier_mw_MHz", prog.frame.carrier_mw_MHz},
            {"carrier_rf_MHz", prog.frame.carrier_rf_MHz},
            {"subspace", to_string(prog.frame.subspace)}}},
          {"elements", elements}};
}

SequenceProgram program_from_json(const nlohmann::json& j) {
  SequenceProgram prog;
  prog.name = j.at("name").get<std::string>();
  const auto& f = j.at("frame");
  prog.frame.carrier_mw_MHz = f.at("carrier_mw_MHz").get<double>();
  prog.frame.carrier_rf_MHz = f.at("carrier_rf_MHz").get<double>();
  prog.frame.subspace = manifold_from_string(f.at("subspace").get<std::string>());
  for (const auto& e : j.at("elements")) {
    if (e.at("kind") == "delay") {
      prog.elements.emplace_back(Delay{e.at("duration_us").get<double>()});
      continue;
    }
    Pulse p;
    p.channel = e.at("channel") == "rf" ? DriveChannel::rf : DriveChannel::mw;
    p.carrier_MHz = e.at("carrier_MHz").get<double>();
    p.phase_deg = e.at("phase_deg").get<double>();
    p.flip_deg = e.at("flip_deg").get<double>();
    if (e.at("rabi_MHz").is_number()) p.rabi_MHz = e.at("rabi_MHz").get<double>();
    if (e.contains("target"))
      p.target = NmrTarget{e["target"].at("ms").get<int>(), e["target"].at("mi_a").get<int>(),
                           e["target"].at("mi_b").get<int>()};
    prog.elements.emplace_back(p);
  }
  prog.validate();
  return prog;
}

}  // namespace nvsim
