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

#include "nvsim/repro.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nvsim/fitkit.hpp"

namespace nvsim::repro {

namespace {

using nlohmann::json;

double num(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("repro config: missing key '") + key + "'");
  return j.at(key).get<double>();
}

std::pair<double, double> range(const json& j, const char* key) {
  const auto& r = j.at(key);
  if (!r.is_array() || r.size() != 2) throw std::invalid_argument(std::string("repro config: '") + key + "' must be [lo, hi]");
  return {r[0].get<double>(), r[1].get<double>()};
}

RegisterSpec register_from(const json& j) {
  RegisterSpec spec = RegisterSpec::preset(j.value("preset", std::string("natural-sample")));
  if (j.contains("field_mT")) spec.field_mT = j["field_mT"].get<double>();
  if (j.contains("t2s_e_us")) spec.t2s_e_us = j["t2s_e_us"].get<double>();
  spec.validate();
  return spec;
}

// pi/2 duration in ns -> Rabi frequency in MHz.
double rabi_from_pi2_ns(double ns) { return 1.0 / (4.0 * ns * 1e-3); }

void add_program_physicality(Physicality& phys, const SequenceProgram& prog, const RegisterSpec& spec) {
  const Operator u = sequence_propagator(prog, spec);
  phys.add_unitary(u);
  const Operator rho0 = initial_state(spec, prog.frame);
  phys.add_density(u * rho0 * u.adjoint());
}

// Rows of a truth table against [input, output] pairs.
void compare_table(Report& rep, const std::string& name, const TruthTable& table, const json& expected) {
  std::map<std::string, std::string> want;
  for (const auto& row : expected) want[row.at(0).get<std::string>()] = row.at(1).get<std::string>();
  int mismatches = 0;
  double min_pop = 1.0;
  for (const auto& row : table.rows) {
    const auto it = want.find(row.input);
    if (it == want.end()) continue;
    if (it->second != row.output || row.tie) ++mismatches;
    min_pop = std::min(min_pop, row.population);
  }
  int missing = 0;
  for (const auto& [in, out] : want)
    if (std::none_of(table.rows.begin(), table.rows.end(), [&](const TruthRow& r) { return r.input == in; }))
      ++missing;
  rep.checks.push_back({name + " mismatched rows", static_cast<double>(mismatches + missing), 0.0, 0.0});
  rep.checks.push_back({name + " min output population", min_pop, 1.0 - 1e-9, 1.0});
  rep.tables.emplace_back(name, table);
}

Report table1(const json& cfg) {
  Report rep;
  const RegisterSpec spec = register_from(cfg);
  StandardParams ideal;
  ideal.ideal_pulses = true;
  for (auto [kind, key] : {std::pair{StandardKind::u1, "U1"}, std::pair{StandardKind::u2, "U2"}}) {
    const auto prog = build_standard_sequence(kind, spec, ideal);
    const Operator u = sequence_propagator(prog, spec);
    compare_table(rep, key, truth_table(u, state_space(spec, prog.frame).labels()), cfg.at("expected").at(key));
    add_program_physicality(rep.physicality, prog, spec);
  }
  return rep;
}

Report table3(const json& cfg, Execution exec) {
  Report rep;
  const RegisterSpec spec = register_from(cfg);
  StandardParams ideal;
  ideal.ideal_pulses = true;
  StandardParams finite;
  finite.cnot13_rabi_MHz = num(cfg, "finite_rabi_MHz");
  finite.compensate_pulse_delay = cfg.value("compensate_pulse_delay", true);
  RamseyParams readout;
  const json& ro = cfg.at("readout");
  readout.t_max_us = num(ro, "t_max_us");
  readout.dt_us = num(ro, "dt_us");
  readout.rabi_MHz = num(ro, "rabi_MHz");

  for (auto [kind, key, control] : {std::tuple{StandardKind::cnot1_13c, "CNOT1", -1},
                                    std::tuple{StandardKind::cnot2_13c, "CNOT2", 1}}) {
    const auto prog = build_standard_sequence(kind, spec, ideal);
    const Operator u = sequence_propagator(prog, spec);
    const auto embedded = embed_electron_carbon(u, spec, prog.frame.subspace);
    compare_table(rep, key, truth_table(embedded.u, embedded.labels), cfg.at("expected").at(key));
    add_program_physicality(rep.physicality, prog, spec);

    // Finite pulses: process fidelity on the m_I = +1 slice, and the spectral estimator.
    const auto fprog = build_standard_sequence(kind, spec, finite);
    const Operator uf = sequence_propagator(fprog, spec);
    add_program_physicality(rep.physicality, fprog, spec);
    const StateSpace space = state_space(spec, prog.frame);
    std::vector<int> slice;
    for (int i = 0; i < space.dim(); ++i)
      if (space.state(i).mi == 1) slice.push_back(i);
    const double f = process_fidelity(uf, u, slice);
    const double ratio = peak_ratio(fprog, spec, {0, 1, control}, RelaxationModel{}, readout, exec);
    rep.checks.push_back({std::string(key) + " finite-pulse process fidelity", f, num(cfg, "min_fidelity"), 1.0});
    rep.checks.push_back({std::string(key) + " |peak ratio - process fidelity|", std::abs(ratio - f), 0.0,
                          num(cfg, "ratio_tolerance")});
  }
  return rep;
}

std::vector<double> offsets_to_carriers(const RegisterSpec& spec, const std::vector<double>& nu) {
  const double centre = manifold_center_MHz(spec, Manifold::minus_one);
  std::vector<double> out;
  for (double v : nu) out.push_back(centre - v);
  return out;
}

void sweep_physicality(Physicality& phys, const RegisterSpec& spec, const SweepParams& p, int stride) {
  for (std::size_t k = 0; k < p.carriers_MHz.size(); k += static_cast<std::size_t>(stride)) {
    const double c = p.carriers_MHz[k];
    std::optional<double> rabi = p.rabi_MHz;
    for (const auto& seg : p.segments)
      if (c >= seg.from_MHz && c < seg.to_MHz) rabi = seg.rabi_MHz;
    Pulse a;
    a.carrier_MHz = c;
    a.rabi_MHz = rabi;
    Pulse b = a;
    b.phase_deg = 90.0;
    const SequenceProgram prog{"sweep_point", {c, 0.0, p.frame},
                               {a, Delay{p.tau_us.value_or(1.0 / (2.0 * std::abs(spec.hyperfine_MHz)))}, b}};
    add_program_physicality(phys, prog, spec);
  }
}

ExperimentResult as_offset_axis(ExperimentResult r, const std::vector<double>& nu) {
  r.axis = {"offset", "MHz", nu};
  return r;
}

Report eq9(const json& cfg, Execution exec) {
  Report rep;
  const RegisterSpec spec = register_from(cfg);
  const auto nu = linspace(num(cfg, "offset_min_MHz"), num(cfg, "offset_max_MHz"), cfg.at("steps").get<int>());
  SweepParams p;
  p.carriers_MHz = offsets_to_carriers(spec, nu);
  auto r = as_offset_axis(offset_sweep(spec, p, exec), nu);
  double dev = 0.0;
  for (std::size_t k = 0; k < nu.size(); ++k)
    dev = std::max(dev, std::abs(r.values[k] - eq9_population(nu[k], spec.hyperfine_MHz)));
  rep.checks.push_back({"max |simulated - closed form|", dev, 0.0, num(cfg, "tolerance")});
  r.metadata["title"] = "Ground-state population vs offset, ideal pulses";
  rep.series.push_back({"eq9_sweep", r, report::ChartStyle::line});

  ExperimentResult formula = r;
  for (std::size_t k = 0; k < nu.size(); ++k) formula.values[k] = eq9_population(nu[k], spec.hyperfine_MHz);
  formula.metadata = {{"title", "1/2 - sin(pi nu / A)/6"}, {"program", "closed_form"}};
  rep.series.push_back({"eq9_formula", formula, report::ChartStyle::line});
  sweep_physicality(rep.physicality, spec, p, 20);
  return rep;
}

// Finite-pulse populations at the two hyperfine-shifted offsets (U1 and U2).
void finite_offset_checks(Report& rep, const RegisterSpec& spec, const SweepParams& base, Manifold frame,
                          double tol, Execution exec, const std::string& label) {
  SweepParams p = base;
  p.frame = frame;
  const double a = spec.hyperfine_MHz;
  // Carriers D + gamma_e B -+ A/2 sit at offsets nu = +-A/2.
  p.carriers_MHz = offsets_to_carriers(spec, {a / 2.0, -a / 2.0});
  const auto r = offset_sweep(spec, p, exec);
  rep.checks.push_back({label + "P(nu1) vs 1/3", std::abs(r.values[0] - 1.0 / 3.0), 0.0, tol});
  rep.checks.push_back({label + "P(nu2) vs 2/3", std::abs(r.values[1] - 2.0 / 3.0), 0.0, tol});
}

Report fig7(const json& cfg, Execution exec) {
  Report rep;
  const RegisterSpec spec = register_from(cfg);
  const auto nu = linspace(num(cfg, "offset_min_MHz"), num(cfg, "offset_max_MHz"), cfg.at("steps").get<int>());
  SweepParams ideal;
  ideal.carriers_MHz = offsets_to_carriers(spec, nu);
  SweepParams finite = ideal;
  finite.rabi_MHz = rabi_from_pi2_ns(num(cfg, "pi2_duration_ns"));

  auto ri = as_offset_axis(offset_sweep(spec, ideal, exec), nu);
  ri.metadata["title"] = "Offset dependence, ideal pulses";
  auto rf = as_offset_axis(offset_sweep(spec, finite, exec), nu);
  rf.metadata["title"] = "Offset dependence, finite pulses";
  rep.series.push_back({"fig7_ideal", ri, report::ChartStyle::line});
  rep.series.push_back({"fig7_finite", rf, report::ChartStyle::line});
  finite_offset_checks(rep, spec, finite, Manifold::minus_one, num(cfg, "tolerance"), exec, "");
  sweep_physicality(rep.physicality, spec, finite, 20);
  return rep;
}

Report fig8(const json& cfg, Execution exec) {
  Report rep;
  const RegisterSpec spec = register_from(cfg);
  SweepParams p;
  p.frame = Manifold::full;
  p.carriers_MHz = linspace(num(cfg, "carrier_min_MHz"), num(cfg, "carrier_max_MHz"), cfg.at("steps").get<int>());
  const double split = num(cfg, "split_MHz");
  p.segments = {{-1e12, split, rabi_from_pi2_ns(num(cfg, "low_pi2_ns"))},
                {split, 1e12, rabi_from_pi2_ns(num(cfg, "high_pi2_ns"))}};
  auto r = offset_sweep(spec, p, exec);
  r.metadata["title"] = "Offset dependence, spin-1 electron and 14N";
  rep.series.push_back({"fig8_sweep", r, report::ChartStyle::line});

  // Hyperfine-shifted carriers of both manifolds: the CNOT offsets give 1/3
  // and 2/3, pulse calibration taken from the segment each carrier sits in.
  SweepParams points = p;
  const double half = std::abs(spec.hyperfine_MHz) / 2.0;
  for (Manifold m : {Manifold::minus_one, Manifold::plus_one}) {
    const double c = manifold_center_MHz(spec, m);
    points.carriers_MHz = {c - half, c + half};
    const auto v = offset_sweep(spec, points, exec).values;
    const std::string label = m == Manifold::minus_one ? "m_S=-1" : "m_S=+1";
    rep.checks.push_back({label + ": |P(centre - |A|/2) - 2/3|", std::abs(v[0] - 2.0 / 3.0), 0.0, num(cfg, "tolerance")});
    rep.checks.push_back({label + ": |P(centre + |A|/2) - 1/3|", std::abs(v[1] - 1.0 / 3.0), 0.0, num(cfg, "tolerance")});
  }
  const double lo = *std::min_element(r.values.begin(), r.values.end());
  const double hi = *std::max_element(r.values.begin(), r.values.end());
  rep.checks.push_back({"min population", lo, 0.0, 1.0});
  rep.checks.push_back({"max population", hi, 0.0, 1.0});
  sweep_physicality(rep.physicality, spec, p, 40);
  return rep;
}

Report fig9(const json& cfg, Execution exec) {
  Report rep;
  RegisterSpec spec = register_from(cfg);
  const double rabi = num(cfg, "rabi_MHz");
  spec.t2s_e_us = num(cfg, "t2s_e_us");
  const RelaxationModel dephased = RelaxationModel::lindblad_from(spec);
  const RelaxationModel closed{};

  const double f_inf = selective_pi_fidelity(spec, rabi, closed, &rep.physicality);
  const double f_t2 = selective_pi_fidelity(spec, rabi, dephased, &rep.physicality);
  const auto [gap_lo, gap_hi] = range(cfg, "loss_window");
  rep.checks.push_back({"selective pi fidelity, T2 -> inf", f_inf, 0.0, 1.0});
  rep.checks.push_back({"selective pi fidelity, finite T2*", f_t2, 0.0, 1.0});
  rep.checks.push_back({"fidelity loss from dephasing", f_inf - f_t2, gap_lo, gap_hi});

  RegisterSpec weak = spec;
  weak.t2s_e_us = num(cfg, "weak_t2s_e_us");
  const double f_weak =
      selective_pi_fidelity(weak, num(cfg, "weak_rabi_kHz") * 1e-3, RelaxationModel::lindblad_from(weak),
                            &rep.physicality);
  const auto [w_lo, w_hi] = range(cfg, "weak_window");
  rep.checks.push_back({"weak selective pi fidelity", f_weak, w_lo, w_hi});

  // Carrier scan of the selective pulse for both relaxation settings.
  const auto nu = linspace(num(cfg, "offset_min_MHz"), num(cfg, "offset_max_MHz"), cfg.at("steps").get<int>());
  const auto carriers = offsets_to_carriers(spec, nu);
  for (auto [name, model] : {std::pair<std::string, RelaxationModel>{"fig9_T2_inf", closed},
                             std::pair<std::string, RelaxationModel>{"fig9_T2_finite", dephased}}) {
    std::vector<double> values(carriers.size());
    std::vector<Operator> finals(carriers.size());
    for_each_index(carriers.size(), exec, [&](std::size_t k) {
      StandardParams sp;
      sp.selective_rabi_MHz = rabi;
      sp.carrier_MHz = carriers[k];
      const auto prog = build_standard_sequence(StandardKind::transfer_selective, spec, sp);
      const Operator rho =
          evolve_density_through_sequence(initial_state(spec, prog.frame), prog, spec, model, Execution::serial);
      values[k] = ms0_population(rho, spec, prog.frame);
      finals[k] = rho;
    });
    for (const auto& rho : finals) rep.physicality.add_density(rho);
    ExperimentResult r;
    r.axis = {"offset", "MHz", nu};
    r.value_name = "P(ms=0)";
    r.value_unit = "population";
    r.values = values;
    r.metadata = {{"program", "transfer_selective"},
                  {"relaxation", to_string(model.mode)},
                  {"spec_hash", spec_hash(spec)},
                  {"title", name == "fig9_T2_inf" ? "Selective pi pulse, T2 -> inf" : "Selective pi pulse, finite T2*"}};
    rep.series.push_back({name, r, report::ChartStyle::line});
  }
  return rep;
}

Report table2(const json& cfg, Execution exec) {
  Report rep;
  const RegisterSpec carbon = register_from(cfg);
  RegisterSpec bare = carbon;
  bare.carbon_present = false;
  NutationParams np;
  np.rf_rabi_kHz = num(cfg, "rf_rabi_kHz");
  np.t_grid_ms = linspace(0.0, num(cfg, "t_max_ms"), cfg.at("steps").get<int>());
  np.pulses.hard_rabi_MHz = rabi_from_pi2_ns(num(cfg, "hard_pi2_ns"));
  np.pulses.compensate_pulse_delay = cfg.value("compensate_pulse_delay", true);
  np.pulses.selective_rabi_MHz = num(cfg, "selective_rabi_MHz");

  struct Scenario {
    std::string name;
    RegisterSpec spec;
    TransferKind transfer;
  };
  const std::vector<Scenario> scenarios = {{"no_carbon_pulsed", bare, TransferKind::pulsed},
                                           {"no_carbon_selective", bare, TransferKind::selective},
                                           {"carbon_pulsed", carbon, TransferKind::pulsed},
                                           {"carbon_selective", carbon, TransferKind::selective}};
  std::map<std::string, double> beta;
  const double nu_tol = num(cfg, "nu_tolerance");
  for (const auto& sc : scenarios) {
    np.transfer = sc.transfer;
    np.model = RelaxationModel::lindblad_from(sc.spec);
    auto r = rabi_nutation(sc.spec, np, exec);
    const auto fit = fit::fit_cosine(r.axis.points, r.values);
    beta[sc.name] = std::abs(fit.value("beta"));
    r.metadata["fit_alpha"] = report::format_number(fit.value("alpha"));
    r.metadata["fit_beta"] = report::format_number(fit.value("beta"));
    r.metadata["fit_nu_R_kHz"] = report::format_number(fit.value("nu_R_kHz"));
    r.metadata["title"] = "RF nutation, " + sc.name;
    rep.series.push_back({"table2_" + sc.name, r, report::ChartStyle::line});
    rep.checks.push_back({sc.name + " |nu_R/configured - 1|", std::abs(fit.value("nu_R_kHz") / np.rf_rabi_kHz - 1.0),
                          0.0, nu_tol});

    // Physicality at a few RF durations through the full program.
    StandardParams sp = np.pulses;
    sp.transfer = sc.transfer;
    sp.rf_rabi_kHz = np.rf_rabi_kHz;
    for (double t_ms : {0.0, 0.5 * np.t_grid_ms.back(), np.t_grid_ms.back()}) {
      sp.rf_duration_us = t_ms * 1e3;
      const auto prog = build_standard_sequence(StandardKind::rabi_nutation, sc.spec, sp);
      rep.physicality.add_density(
          evolve_density_through_sequence(initial_state(sc.spec, prog.frame), prog, sc.spec, np.model, exec));
    }
  }
  rep.checks.push_back({"beta(no carbon) - beta(carbon, pulsed)", beta["no_carbon_pulsed"] - beta["carbon_pulsed"],
                        1e-6, 1.0});
  rep.checks.push_back({"beta(carbon, pulsed) - beta(carbon, selective)",
                        beta["carbon_pulsed"] - beta["carbon_selective"], 1e-6, 1.0});
  rep.checks.push_back({"pulsed-over-selective amplitude gain", beta["carbon_pulsed"] / beta["carbon_selective"] - 1.0,
                        num(cfg, "min_gain"), 10.0});
  return rep;
}

Report timing(const json& cfg) {
  Report rep;
  const RegisterSpec spec = register_from(cfg);
  const auto u1 = build_standard_sequence(StandardKind::u1, spec);
  rep.checks.push_back({"U1 duration (us)", total_duration(u1), 0.0, num(cfg, "max_hard_gate_us")});
  const auto u2 = build_standard_sequence(StandardKind::u2, spec);
  rep.checks.push_back({"U2 duration (us)", total_duration(u2), 0.0, num(cfg, "max_hard_gate_us")});
  add_program_physicality(rep.physicality, u1, spec);
  add_program_physicality(rep.physicality, u2, spec);
  for (const auto& entry : cfg.at("selective")) {
    StandardParams sp;
    sp.selective_rabi_MHz = num(entry, "rabi_MHz");
    const auto prog = build_standard_sequence(StandardKind::transfer_selective, spec, sp);
    rep.checks.push_back({"selective pi at " + report::format_number(sp.selective_rabi_MHz) + " MHz duration (us)",
                          total_duration(prog), num(entry, "min_us"), 1e9});
    add_program_physicality(rep.physicality, prog, spec);
  }
  return rep;
}

}  // namespace

void Physicality::add_density(const Operator& rho) {
  const DensityCheck c = check_density(rho);
  max_trace_error = std::max(max_trace_error, c.trace_error);
  max_hermiticity_error = std::max(max_hermiticity_error, c.hermiticity_error);
  min_eigenvalue = std::min(min_eigenvalue, c.min_eigenvalue);
  ++densities;
}

void Physicality::add_unitary(const Operator& u) {
  max_unitarity_error = std::max(max_unitarity_error, mat::unitarity_error(u));
  ++unitaries;
}

void Physicality::merge(const Physicality& o) {
  max_trace_error = std::max(max_trace_error, o.max_trace_error);
  max_hermiticity_error = std::max(max_hermiticity_error, o.max_hermiticity_error);
  min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
  max_unitarity_error = std::max(max_unitarity_error, o.max_unitarity_error);
  densities += o.densities;
  unitaries += o.unitaries;
}

bool Physicality::ok() const {
  return max_trace_error < 1e-8 && max_hermiticity_error < 1e-8 && min_eigenvalue > -1e-8 &&
         max_unitarity_error < 1e-10;
}

bool Report::passed() const {
  return physicality.ok() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

json Report::summary() const {
  json j;
  j["tag"] = tag;
  j["passed"] = passed();
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"value", report::rounded(c.value)},
                           {"lo", report::rounded(c.lo)},
                           {"hi", report::rounded(c.hi)},
                           {"pass", c.pass()}});
  j["physicality"] = {{"densities", physicality.densities},
                      {"unitaries", physicality.unitaries},
                      {"max_trace_error", report::rounded(physicality.max_trace_error)},
                      {"max_hermiticity_error", report::rounded(physicality.max_hermiticity_error)},
                      {"min_eigenvalue", report::rounded(physicality.min_eigenvalue)},
                      {"max_unitarity_error", report::rounded(physicality.max_unitarity_error)},
                      {"pass", physicality.ok()}};
  j["series"] = json::array();
  for (const auto& s : series) j["series"].push_back(s.name);
  return j;
}

const std::vector<std::string>& tags() {
  static const std::vector<std::string> t = {"table1", "table3",         "eq9",          "fig7",
                                             "fig8",   "fig9-selective", "table2-trend", "timing"};
  return t;
}

std::filesystem::path default_config_path() { return std::filesystem::path(NVSIM_CONFIG_DIR) / "repro.json"; }

json load_config(const std::filesystem::path& path) {
  const std::string text = report::read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

double selective_pi_fidelity(const RegisterSpec& spec, double rabi_MHz, const RelaxationModel& model,
                             Physicality* phys) {
  StandardParams sp;
  sp.selective_rabi_MHz = rabi_MHz;
  const auto prog = build_standard_sequence(StandardKind::transfer_selective, spec, sp);
  const StateSpace space = state_space(spec, prog.frame);
  Operator target = Operator::Identity(space.dim(), space.dim());
  for (int j = 0; j < space.dim(); ++j) {
    const BasisState s = space.state(j);
    if (s.mi != 0) continue;
    const int i = space.index({s.ms == 0 ? -1 : 0, s.mi, s.mc2});
    target(j, j) = 0.0;
    target(i, j) = 1.0;
  }
  const auto inputs = flipped_inputs(target, space);
  return population_fidelity(
      [&](const Operator& rho) {
        Operator out = evolve_density_through_sequence(rho, prog, spec, model, Execution::serial);
        if (phys) phys->add_density(out);
        return out;
      },
      target, inputs);
}

Report reproduce(const std::string& tag, const json& config, Execution exec) {
  if (std::find(tags().begin(), tags().end(), tag) == tags().end())
    throw std::invalid_argument("unknown repro tag '" + tag + "'");
  if (!config.contains(tag)) throw std::invalid_argument("repro config has no section '" + tag + "'");
  const json& cfg = config.at(tag);
  Report rep;
  if (tag == "table1") rep = table1(cfg);
  else if (tag == "table3") rep = table3(cfg, exec);
  else if (tag == "eq9") rep = eq9(cfg, exec);
  else if (tag == "fig7") rep = fig7(cfg, exec);
  else if (tag == "fig8") rep = fig8(cfg, exec);
  else if (tag == "fig9-selective") rep = fig9(cfg, exec);
  else if (tag == "table2-trend") rep = table2(cfg, exec);
  else rep = timing(cfg);
  rep.tag = tag;
  return rep;
}

}  // namespace nvsim::repro
