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

#include "nvsim/dissipation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace nvsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxQuadratureNodes = 20;

double rate_per_us(double time, double scale_to_us) {
  return std::isinf(time) ? 0.0 : 1.0 / (time * scale_to_us);
}

Operator conjugate(const Operator& u, const Operator& rho) {
  Operator out = u * rho * u.adjoint();
  return 0.5 * (out + out.adjoint());
}

}  // namespace

std::string to_string(RelaxationMode m) {
  switch (m) {
    case RelaxationMode::none: return "none";
    case RelaxationMode::lindblad: return "lindblad";
    case RelaxationMode::static_ensemble: return "static_ensemble";
  }
  return "?";
}

RelaxationMode relaxation_mode_from_string(const std::string& s) {
  if (s == "none") return RelaxationMode::none;
  if (s == "lindblad") return RelaxationMode::lindblad;
  if (s == "static_ensemble" || s == "ensemble") return RelaxationMode::static_ensemble;
  throw std::invalid_argument("unknown relaxation mode '" + s + "'");
}

void RelaxationModel::validate() const {
  if (!(t1_e_ms > 0.0) || !(t2s_e_us > 0.0) || !(t2s_n_ms > 0.0))
    throw std::invalid_argument("relaxation: times must be positive");
  if (ensemble_samples < 1) throw std::invalid_argument("relaxation: ensemble_samples must be >= 1");
  if (ensemble_sigma_MHz < 0.0) throw std::invalid_argument("relaxation: ensemble sigma must be >= 0");
  if (mode == RelaxationMode::lindblad && electron_dephasing_rate() < -1e-15)
    throw std::invalid_argument("relaxation: T2* exceeds 2 T1 (negative pure-dephasing rate)");
}

double RelaxationModel::electron_dephasing_rate() const {
  return rate_per_us(t2s_e_us, 1.0) - 0.5 * rate_per_us(t1_e_ms, 1e3);
}

RelaxationModel RelaxationModel::lindblad_from(const RegisterSpec& spec) {
  RelaxationModel m;
  m.mode = RelaxationMode::lindblad;
  m.t1_e_ms = spec.t1_e_ms;
  m.t2s_e_us = spec.t2s_e_us;
  m.t2s_n_ms = spec.t2s_n_ms;
  return m;
}

RelaxationModel RelaxationModel::ensemble_from(const RegisterSpec& spec, int samples) {
  RelaxationModel m;
  m.mode = RelaxationMode::static_ensemble;
  m.t2s_e_us = spec.t2s_e_us;
  m.ensemble_sigma_MHz = sigma_from_t2star(spec.t2s_e_us);
  m.ensemble_samples = samples;
  return m;
}

double sigma_from_t2star(double t2s_us) {
  if (!(t2s_us > 0.0)) throw std::invalid_argument("sigma_from_t2star: T2* must be positive");
  if (std::isinf(t2s_us)) return 0.0;
  // <cos(2 pi delta t)> = exp(-2 pi^2 sigma^2 t^2) = exp(-(t/T2*)^2).
  return std::sqrt(2.0) / (2.0 * kPi * t2s_us);
}

std::vector<Operator> collapse_operators(const RegisterSpec& spec, const FrameSpec& frame,
                                         const RelaxationModel& model, bool with_nuclear) {
  std::vector<Operator> out;
  if (model.mode != RelaxationMode::lindblad) return out;
  model.validate();
  const StateSpace space = state_space(spec, frame);
  const int dim = space.dim();

  const double gamma_phi = std::max(0.0, model.electron_dephasing_rate());
  if (gamma_phi > 0.0) out.push_back(std::sqrt(2.0 * gamma_phi) * electron_sz(spec, frame));

  const double gamma_1 = 0.5 * rate_per_us(model.t1_e_ms, 1e3);
  if (gamma_1 > 0.0) {
    for (int m : space.electron_levels()) {
      if (m == 0) continue;
      Operator up = Operator::Zero(dim, dim), down = Operator::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        const BasisState s = space.state(i);
        if (s.ms != 0) continue;
        const int j = space.index({m, s.mi, s.mc2});
        up(j, i) = std::sqrt(gamma_1);
        down(i, j) = std::sqrt(gamma_1);
      }
      out.push_back(up);
      out.push_back(down);
    }
  }

  const double gamma_n = rate_per_us(model.t2s_n_ms, 1e3);
  if (with_nuclear && gamma_n > 0.0) out.push_back(std::sqrt(2.0 * gamma_n) * nuclear_iz(spec, frame));
  return out;
}

Operator liouvillian(const Operator& h_MHz, std::span<const Operator> collapse) {
  const Eigen::Index n = h_MHz.rows();
  const Operator one = Operator::Identity(n, n);
  const Complex mi2pi(0.0, -mat::kTwoPi);
  Operator l = mi2pi * (mat::kron(one, h_MHz) - mat::kron(h_MHz.transpose(), one));
  for (const auto& c : collapse) {
    const Operator cdc = c.adjoint() * c;
    l += mat::kron(c.conjugate(), c) - 0.5 * mat::kron(one, cdc) - 0.5 * mat::kron(cdc.transpose(), one);
  }
  return l;
}

Operator lindblad_superoperator(const Operator& h_MHz, std::span<const Operator> collapse, double t_us) {
  if (t_us < 0.0) throw std::invalid_argument("lindblad: negative duration");
  return (liouvillian(h_MHz, collapse) * t_us).exp();
}

Operator apply_superoperator(const Operator& s, const Operator& rho) {
  const Eigen::Index n = rho.rows();
  if (s.rows() != n * n) throw std::invalid_argument("superoperator dimension mismatch");
  const Eigen::VectorXcd w = s * Eigen::Map<const Eigen::VectorXcd>(rho.data(), n * n);
  const Operator out = Eigen::Map<const Operator>(w.data(), n, n);
  return 0.5 * (out + out.adjoint());
}

Operator lindblad_propagate(const Operator& rho, const Operator& h_MHz, std::span<const Operator> collapse,
                            double t_us) {
  require_density(rho);
  if (t_us < 0.0) throw std::invalid_argument("lindblad: negative duration");
  if (!mat::is_hermitian(h_MHz, 1e-10)) throw std::invalid_argument("lindblad: Hamiltonian not Hermitian");
  if (collapse.empty()) return conjugate(mat::propagator_exp(h_MHz, t_us), rho);
  return apply_superoperator(lindblad_superoperator(h_MHz, collapse, t_us), rho);
}

Operator lindblad_propagate(const Operator& rho, const Operator& h_MHz, const RelaxationModel& model,
                            const RegisterSpec& spec, const FrameSpec& frame, double t_us) {
  const auto collapse = collapse_operators(spec, frame, model, true);
  return lindblad_propagate(rho, h_MHz, collapse, t_us);
}

Operator initial_state(const RegisterSpec& spec, const FrameSpec& frame) {
  const StateSpace space = state_space(spec, frame);
  Operator rho = Operator::Zero(space.dim(), space.dim());
  const auto ground = space.indices_with_ms(0);
  for (int i : ground) rho(i, i) = 1.0 / static_cast<double>(ground.size());
  return rho;
}

DensityCheck check_density(const Operator& rho) {
  DensityCheck c;
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const Operator sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(sym, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = solver.eigenvalues().minCoeff();
  return c;
}

void require_density(const Operator& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw std::invalid_argument("density matrix must be square and non-empty");
  if (!check_density(rho).ok(tol)) throw std::invalid_argument("input is not a valid density matrix");
}

EnsembleNodes ensemble_nodes(const RelaxationModel& model) {
  EnsembleNodes out;
  const int n = model.ensemble_samples;
  if (n < 1) throw std::invalid_argument("ensemble: samples must be >= 1");
  if (model.ensemble_sigma_MHz == 0.0 || n == 1) {
    out.offsets_MHz = {0.0};
    out.weights = {1.0};
    return out;
  }
  if (n <= kMaxQuadratureNodes) {
    // Golub-Welsch for the probabilists' Hermite weight exp(-x^2/2).
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    for (int i = 0; i < n; ++i) {
      out.offsets_MHz.push_back(model.ensemble_sigma_MHz * solver.eigenvalues()(i));
      const double v0 = solver.eigenvectors()(0, i);
      out.weights.push_back(v0 * v0);
    }
    return out;
  }
  std::mt19937_64 rng(model.seed);
  std::normal_distribution<double> normal(0.0, model.ensemble_sigma_MHz);
  for (int i = 0; i < n; ++i) {
    out.offsets_MHz.push_back(normal(rng));
    out.weights.push_back(1.0 / n);
  }
  return out;
}

SequenceChannel::SequenceChannel(const SequenceProgram& prog, const RegisterSpec& spec,
                                 const RelaxationModel& model, double electron_shift_MHz) {
  if (model.mode == RelaxationMode::static_ensemble)
    throw std::invalid_argument("SequenceChannel: expand static ensembles with ensemble_members()");
  const auto segments = compile_segments(prog, spec);
  dim_ = static_cast<int>(rotating_hamiltonian(spec, prog.frame).rows());
  const Operator shift = electron_shift_MHz * electron_sz(spec, prog.frame);
  const auto electron_only = collapse_operators(spec, prog.frame, model, false);
  const auto with_nuclear = collapse_operators(spec, prog.frame, model, true);
  for (const auto& seg : segments) {
    Step step;
    if (seg.instantaneous) {
      step.unitary = *seg.instantaneous;
      steps_.push_back(std::move(step));
      continue;
    }
    const Operator h = seg.generator + shift;
    const auto& c = seg.kind == Segment::Kind::mw_pulse ? electron_only : with_nuclear;
    if (c.empty()) {
      step.unitary = seg.frame_kick * mat::propagator_exp(h, seg.duration_us) * seg.pre_kick;
    } else {
      step.superop = lindblad_superoperator(h, c, seg.duration_us);
      step.pre = seg.pre_kick;
      step.kick = seg.frame_kick;
    }
    steps_.push_back(std::move(step));
  }
}

Operator SequenceChannel::apply(const Operator& rho) const {
  if (rho.rows() != dim_) throw std::invalid_argument("SequenceChannel: state dimension mismatch");
  Operator out = rho;
  for (const auto& step : steps_) {
    if (step.unitary) {
      out = conjugate(*step.unitary, out);
    } else {
      out = conjugate(step.kick, apply_superoperator(*step.superop, conjugate(step.pre, out)));
    }
  }
  return out;
}

std::vector<EnsembleMember> ensemble_members(const RelaxationModel& model) {
  if (model.mode != RelaxationMode::static_ensemble) return {EnsembleMember{0.0, 1.0, model}};
  model.validate();
  const EnsembleNodes nodes = ensemble_nodes(model);
  RelaxationModel closed;
  std::vector<EnsembleMember> out;
  for (std::size_t k = 0; k < nodes.offsets_MHz.size(); ++k)
    out.push_back({nodes.offsets_MHz[k], nodes.weights[k], closed});
  return out;
}

Operator evolve_density_through_sequence(const Operator& rho0, const SequenceProgram& prog,
                                         const RegisterSpec& spec, const RelaxationModel& model,
                                         Execution exec) {
  require_density(rho0);
  const auto members = ensemble_members(model);
  std::vector<Operator> results(members.size());
  for_each_index(members.size(), exec, [&](std::size_t k) {
    results[k] = SequenceChannel(prog, spec, members[k].model, members[k].shift_MHz).apply(rho0);
  });
  Operator out = Operator::Zero(rho0.rows(), rho0.cols());
  for (std::size_t k = 0; k < results.size(); ++k) out += members[k].weight * results[k];
  return out;
}

double ms0_population(const Operator& rho, const RegisterSpec& spec, const FrameSpec& frame) {
  return (ms0_projector(spec, frame) * rho).trace().real();
}

}  // namespace nvsim
