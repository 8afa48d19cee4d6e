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

#include "nvsim/spinmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nvsim {

namespace {

constexpr double kCarrierWindowMHz = 50.0;

Operator diag(std::initializer_list<double> values) {
  Operator m = Operator::Zero(static_cast<int>(values.size()), static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

int electron_index_full(int ms) { return 1 - ms; }
int nuclear_index(int mi) { return 1 - mi; }
int carbon_index(int mc2) { return mc2 > 0 ? 0 : 1; }

// Tensor layout electron (2|3) x nitrogen (3) x carbon (1|2).
Operator on_full(const RegisterSpec& spec, const Operator& e, const Operator& n, const Operator& c) {
  const Operator factors[] = {e, n, spec.carbon_present ? c : mat::identity(1)};
  return mat::kron_all(factors);
}

}  // namespace

// ---------------------------------------------------------------------------
// RegisterSpec

void RegisterSpec::validate(bool dissipation_enabled) const {
  if (!(zfs_MHz > 0.0)) throw std::invalid_argument("register: D must be positive");
  if (field_mT < 0.0) throw std::invalid_argument("register: B must be non-negative");
  if (std::abs(azx_kHz) > 1000.0 * std::abs(zfs_MHz))
    throw std::invalid_argument("register: Azx out of range");
  if (dissipation_enabled && (!(t1_e_ms > 0.0) || !(t2s_e_us > 0.0) || !(t2s_n_ms > 0.0)))
    throw std::invalid_argument("register: relaxation times must be positive");
}

RegisterSpec RegisterSpec::natural_sample() { return RegisterSpec{}; }

RegisterSpec RegisterSpec::enriched_sample() {
  RegisterSpec s;
  s.field_mT = 12.3;
  s.carbon_present = true;
  s.azz_kHz = 150.0;
  s.azx_kHz = 0.0;
  s.t2s_e_us = 10.0;
  return s;
}

RegisterSpec RegisterSpec::preset(const std::string& name) {
  if (name == "natural-sample" || name == "natural") return natural_sample();
  if (name == "enriched-sample" || name == "enriched") return enriched_sample();
  throw std::invalid_argument("unknown register preset '" + name + "'");
}

std::string to_string(Manifold m) {
  switch (m) {
    case Manifold::minus_one: return "0,-1";
    case Manifold::plus_one: return "0,+1";
    case Manifold::full: return "full";
  }
  return "?";
}

Manifold manifold_from_string(const std::string& s) {
  if (s == "0,-1" || s == "minus_one" || s == "m0_m1") return Manifold::minus_one;
  if (s == "0,+1" || s == "0,1" || s == "plus_one" || s == "m0_p1") return Manifold::plus_one;
  if (s == "full") return Manifold::full;
  throw std::invalid_argument("unknown manifold '" + s + "'");
}

std::string BasisState::label() const {
  std::string out = std::to_string(ms) + " " + std::to_string(mi);
  if (mc2 > 0) out += " up";
  if (mc2 < 0) out += " down";
  return out;
}

// ---------------------------------------------------------------------------
// StateSpace

StateSpace::StateSpace(Manifold manifold, bool carbon) : manifold_(manifold), carbon_(carbon) {
  switch (manifold) {
    case Manifold::minus_one: electron_levels_ = {0, -1}; break;
    case Manifold::plus_one: electron_levels_ = {0, 1}; break;
    case Manifold::full: electron_levels_ = {1, 0, -1}; break;
  }
}

int StateSpace::dim() const { return electron_dim() * 3 * carbon_dim(); }

int StateSpace::index(const BasisState& s) const {
  const auto it = std::find(electron_levels_.begin(), electron_levels_.end(), s.ms);
  if (it == electron_levels_.end() || s.mi < -1 || s.mi > 1) return -1;
  if (carbon_ != (s.mc2 != 0)) return -1;
  const int e = static_cast<int>(it - electron_levels_.begin());
  const int c = carbon_ ? carbon_index(s.mc2) : 0;
  return (e * 3 + nuclear_index(s.mi)) * carbon_dim() + c;
}

BasisState StateSpace::state(int index) const {
  if (index < 0 || index >= dim()) throw std::out_of_range("state index");
  const int c = index % carbon_dim();
  const int n = (index / carbon_dim()) % 3;
  const int e = index / (carbon_dim() * 3);
  return BasisState{electron_levels_[e], 1 - n, carbon_ ? (c == 0 ? 1 : -1) : 0};
}

std::vector<std::string> StateSpace::labels() const {
  std::vector<std::string> out;
  for (int i = 0; i < dim(); ++i) out.push_back(state(i).label());
  return out;
}

std::vector<int> StateSpace::indices_with_ms(int ms) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (state(i).ms == ms) out.push_back(i);
  return out;
}

StateSpace state_space(const RegisterSpec& spec, const FrameSpec& frame) {
  return StateSpace(frame.subspace, spec.carbon_present);
}

// ---------------------------------------------------------------------------
// Operators

SpinOperators spin_operators(double s) {
  if (s == 0.5) {
    SpinOperators op;
    op.x = Operator::Zero(2, 2);
    op.y = Operator::Zero(2, 2);
    op.x << 0.0, 0.5, 0.5, 0.0;
    op.y << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
    op.z = diag({0.5, -0.5});
    return op;
  }
  if (s == 1.0) {
    // Ladder construction: <m+1|S+|m> = sqrt(s(s+1) - m(m+1)) = sqrt(2).
    Operator plus = Operator::Zero(3, 3);
    plus(0, 1) = std::sqrt(2.0);
    plus(1, 2) = std::sqrt(2.0);
    SpinOperators op;
    op.x = 0.5 * (plus + plus.adjoint());
    op.y = Complex(0.0, -0.5) * (plus - plus.adjoint());
    op.z = diag({1.0, 0.0, -1.0});
    return op;
  }
  throw std::invalid_argument("spin_operators: only s = 1/2 and s = 1 are supported");
}

Operator lab_hamiltonian(const RegisterSpec& spec) {
  spec.validate();
  const auto e = spin_operators(1.0);
  const auto n = spin_operators(1.0);
  const auto c = spin_operators(0.5);
  const Operator e1 = mat::identity(3), n1 = mat::identity(3), c1 = mat::identity(2);
  const double b = spec.field_mT;
  const double gamma_n = spec.gamma_n14_kHz_per_mT * 1e-3;

  Operator h = spec.zfs_MHz * on_full(spec, e.z * e.z, n1, c1);
  h -= spec.gamma_e_MHz_per_mT * b * on_full(spec, e.z, n1, c1);
  h += spec.quadrupole_MHz * on_full(spec, e1, n.z * n.z, c1);
  h -= gamma_n * b * on_full(spec, e1, n.z, c1);
  h += spec.hyperfine_MHz * on_full(spec, e.z, n.z, c1);
  if (spec.carbon_present) {
    h += spec.azz_kHz * 1e-3 * on_full(spec, e.z, n1, c.z);
    h += spec.azx_kHz * 1e-3 * on_full(spec, e.z, n1, c.x);
    h -= spec.gamma_c13_kHz_per_mT * 1e-3 * b * on_full(spec, e1, n1, c.z);
  }
  return h;
}

double manifold_center_MHz(const RegisterSpec& spec, Manifold m) {
  switch (m) {
    case Manifold::minus_one: return spec.zfs_MHz + spec.gamma_e_MHz_per_mT * spec.field_mT;
    case Manifold::plus_one: return spec.zfs_MHz - spec.gamma_e_MHz_per_mT * spec.field_mT;
    case Manifold::full: return spec.zfs_MHz;
  }
  return spec.zfs_MHz;
}

double electron_offset_MHz(const RegisterSpec& spec, const FrameSpec& frame) {
  return manifold_center_MHz(spec, frame.subspace) - frame.carrier_mw_MHz;
}

Operator rotating_hamiltonian(const RegisterSpec& spec, const FrameSpec& frame) {
  spec.validate();
  if (frame.subspace == Manifold::full) {
    const auto e = spin_operators(1.0);
    return lab_hamiltonian(spec) -
           frame.carrier_mw_MHz * on_full(spec, e.z * e.z, mat::identity(3), mat::identity(2));
  }

  const double nu = electron_offset_MHz(spec, frame);
  if (std::abs(nu) > kCarrierWindowMHz)
    throw std::invalid_argument("rotating frame: carrier " + std::to_string(frame.carrier_mw_MHz) +
                                " MHz is more than 50 MHz from the " + to_string(frame.subspace) +
                                " transition");
  const double m = frame.subspace == Manifold::minus_one ? -1.0 : 1.0;
  const Operator sz = diag({1.0, -1.0});
  const Operator e1 = mat::identity(2), n1 = mat::identity(3), c1 = mat::identity(2);
  const auto n = spin_operators(1.0);
  const auto c = spin_operators(0.5);

  Operator h = 0.5 * nu * on_full(spec, sz, n1, c1);
  h += -m * 0.5 * spec.hyperfine_MHz * on_full(spec, sz, n.z, c1);
  if (spec.carbon_present) {
    h += -m * 0.5 * spec.azz_kHz * 1e-3 * on_full(spec, sz, n1, c.z);
    h += -m * 0.5 * spec.azx_kHz * 1e-3 * on_full(spec, sz, n1, c.x);
    h -= spec.gamma_c13_kHz_per_mT * 1e-3 * spec.field_mT * on_full(spec, e1, n1, c.z);
  }
  return h;
}

DriveOperators mw_drive_operators(const RegisterSpec& spec, const FrameSpec& frame, int only_ms) {
  const Operator n1 = mat::identity(3), c1 = mat::identity(2);
  if (frame.subspace != Manifold::full) {
    Operator sx = Operator::Zero(2, 2), sy = Operator::Zero(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    sy << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return {on_full(spec, sx, n1, c1), on_full(spec, sy, n1, c1)};
  }
  // In the Sz^2 frame both |+-1> carry the carrier phase: (e^{-i phi}|m><0| + h.c.).
  Operator x = Operator::Zero(3, 3), y = Operator::Zero(3, 3);
  for (int ms : {1, -1}) {
    if (only_ms != 0 && ms != only_ms) continue;
    const int k = electron_index_full(ms), z = electron_index_full(0);
    x(k, z) = 1.0;
    x(z, k) = 1.0;
    y(k, z) = Complex(0.0, -1.0);
    y(z, k) = Complex(0.0, 1.0);
  }
  return {on_full(spec, x, n1, c1), on_full(spec, y, n1, c1)};
}

Operator electron_sz(const RegisterSpec& spec, const FrameSpec& frame) {
  const StateSpace space = state_space(spec, frame);
  Operator out = Operator::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) out(i, i) = space.state(i).ms;
  return out;
}

Operator nuclear_iz(const RegisterSpec& spec, const FrameSpec& frame) {
  const StateSpace space = state_space(spec, frame);
  Operator out = Operator::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) out(i, i) = space.state(i).mi;
  return out;
}

Operator ms0_projector(const RegisterSpec& spec, const FrameSpec& frame) {
  const StateSpace space = state_space(spec, frame);
  Operator out = Operator::Zero(space.dim(), space.dim());
  for (int i : space.indices_with_ms(0)) out(i, i) = 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Transitions

namespace {

// Energy of each full-space basis state. With Azx != 0 the 13C states mix, so
// each eigenvalue is assigned to the basis state carrying most of its weight.
std::vector<double> basis_energies(const RegisterSpec& spec) {
  const Operator h = lab_hamiltonian(spec);
  const int dim = static_cast<int>(h.rows());
  std::vector<double> energies(dim);
  if (spec.azx_kHz == 0.0 || !spec.carbon_present) {
    for (int i = 0; i < dim; ++i) energies[i] = h(i, i).real();
    return energies;
  }
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  std::vector<bool> taken(dim, false);
  for (int k = 0; k < dim; ++k) {
    int best = -1;
    double weight = -1.0;
    for (int i = 0; i < dim; ++i) {
      const double w = std::norm(solver.eigenvectors()(i, k));
      if (!taken[i] && w > weight) weight = w, best = i;
    }
    taken[best] = true;
    energies[best] = solver.eigenvalues()(k);
  }
  return energies;
}

}  // namespace

double transition_energy_MHz(const RegisterSpec& spec, const BasisState& a, const BasisState& b) {
  const StateSpace space(Manifold::full, spec.carbon_present);
  const int ia = space.index(a), ib = space.index(b);
  if (ia < 0 || ib < 0) throw std::invalid_argument("transition: state not in register");
  const auto e = basis_energies(spec);
  return e[ib] - e[ia];
}

std::vector<Transition> transition_frequencies(const RegisterSpec& spec, Channel channel) {
  const StateSpace space(Manifold::full, spec.carbon_present);
  const auto energies = basis_energies(spec);
  std::vector<Transition> out;
  for (int i = 0; i < space.dim(); ++i)
    for (int j = i + 1; j < space.dim(); ++j) {
      const BasisState a = space.state(i), b = space.state(j);
      bool selected = false;
      switch (channel) {
        case Channel::esr:
          selected = a.mi == b.mi && a.mc2 == b.mc2 && (a.ms == 0) != (b.ms == 0);
          break;
        case Channel::nmr14:
          selected = a.ms == b.ms && a.mc2 == b.mc2 && std::abs(a.mi - b.mi) == 1;
          break;
        case Channel::nmr13:
          selected = spec.carbon_present && a.ms == b.ms && a.mi == b.mi && a.mc2 != b.mc2;
          break;
      }
      if (!selected) continue;
      // Orient pairs from m_S = 0 (ESR) or from the central 14N level (NMR).
      Transition t{a, b, 0.0};
      if ((channel == Channel::esr && b.ms == 0) || (channel == Channel::nmr14 && b.mi == 0))
        std::swap(t.a, t.b);
      t.freq_MHz = std::abs(energies[space.index(t.b)] - energies[space.index(t.a)]);
      out.push_back(t);
    }
  std::stable_sort(out.begin(), out.end(),
                   [](const Transition& l, const Transition& r) { return l.freq_MHz < r.freq_MHz; });
  return out;
}

NuclearLineFit fit_nuclear_lines(const RegisterSpec& seed, std::span<const double> measured_MHz) {
  if (measured_MHz.size() < 3) throw std::invalid_argument("fit_nuclear_lines: need >= 3 lines");
  std::vector<double> target(measured_MHz.begin(), measured_MHz.end());
  std::sort(target.begin(), target.end());

  auto model = [&](const Eigen::Vector3d& p) {
    RegisterSpec s = seed;
    s.carbon_present = false;
    s.field_mT = p(0);
    s.hyperfine_MHz = p(1);
    s.quadrupole_MHz = p(2);
    std::vector<double> lines;
    for (const auto& t : transition_frequencies(s, Channel::nmr14))
      if (t.a.ms == 0 || t.a.ms == -1) lines.push_back(t.freq_MHz);
    std::sort(lines.begin(), lines.end());
    if (lines.size() != target.size())
      throw std::invalid_argument("fit_nuclear_lines: expected " + std::to_string(lines.size()) +
                                  " measured lines");
    return lines;
  };
  auto residual = [&](const Eigen::Vector3d& p) {
    const auto lines = model(p);
    Eigen::VectorXd r(static_cast<Eigen::Index>(lines.size()));
    for (std::size_t i = 0; i < lines.size(); ++i) r(i) = lines[i] - target[i];
    return r;
  };

  Eigen::Vector3d p(seed.field_mT, seed.hyperfine_MHz, seed.quadrupole_MHz);
  for (int iter = 0; iter < 50; ++iter) {
    const Eigen::VectorXd r = residual(p);
    Eigen::MatrixXd jac(r.size(), 3);
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d q = p;
      const double h = 1e-6 * std::max(1.0, std::abs(p(k)));
      q(k) += h;
      jac.col(k) = (residual(q) - r) / h;
    }
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-r);
    p += step;
    if (step.norm() < 1e-12) break;
  }

  NuclearLineFit fit;
  fit.spec = seed;
  fit.spec.field_mT = p(0);
  fit.spec.hyperfine_MHz = p(1);
  fit.spec.quadrupole_MHz = p(2);
  fit.model_MHz = model(p);
  for (std::size_t i = 0; i < target.size(); ++i)
    fit.max_deviation_MHz = std::max(fit.max_deviation_MHz, std::abs(fit.model_MHz[i] - target[i]));
  return fit;
}

}  // namespace nvsim
