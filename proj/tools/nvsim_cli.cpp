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

// nvsim command-line front end.
//
// Exit status: 0 success, 1 diagnostics with errors (bad input, failed
// comparison), 2 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nvsim/dissipation.hpp"
#include "nvsim/fitkit.hpp"
#include "nvsim/observe.hpp"
#include "nvsim/repro.hpp"
#include "nvsim/report.hpp"
#include "nvsim/seqlang.hpp"

namespace {

using namespace nvsim;

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitIo = 2;

// Input error carrying the exit status it maps to.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "csv";
  std::string output;
  std::string preset = "natural-sample";
  std::string system_file;
  std::string relaxation = "none";
  int samples = 16;
  std::uint64_t seed = 20260101;
  bool serial = false;

  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
};

void emit(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  report::write_atomic(c.output, text);
}

lang::ParseResult parse_file(const std::string& path) {
  const std::string text = report::read_text(path);
  auto result = lang::parse(text);
  for (const auto& d : result.diagnostics) std::cerr << lang::format_diagnostic(d, path) << "\n";
  if (result.has_errors()) throw UsageError(path + ": parse failed");
  return result;
}

RegisterSpec load_register(const Common& c) {
  if (!c.system_file.empty()) {
    auto parsed = parse_file(c.system_file);
    if (!parsed.spec) throw UsageError(c.system_file + ": no system block");
    return *parsed.spec;
  }
  return RegisterSpec::preset(c.preset);
}

RelaxationModel make_model(const Common& c, const RegisterSpec& spec) {
  RelaxationModel m;
  const auto mode = relaxation_mode_from_string(c.relaxation);
  if (mode == RelaxationMode::lindblad) m = RelaxationModel::lindblad_from(spec);
  if (mode == RelaxationMode::static_ensemble) m = RelaxationModel::ensemble_from(spec, c.samples);
  m.seed = c.seed;
  return m;
}

void emit_result(const Common& c, ExperimentResult r, report::ChartStyle style) {
  r.metadata["seed"] = std::to_string(c.seed);
  if (c.format == "csv") return emit(c, report::to_csv(r));
  if (c.format == "json") return emit(c, report::dump(report::to_json(r)));
  if (c.format == "svg") return emit(c, report::svg_chart(r, style));
  throw UsageError("unknown format '" + c.format + "' (csv, json, svg)");
}

const SequenceProgram& pick_program(const lang::ParseResult& parsed, const std::string& name) {
  if (parsed.programs.empty()) throw UsageError("input defines no sequence");
  if (name.empty()) return parsed.programs.front();
  for (const auto& p : parsed.programs)
    if (p.name == name) return p;
  throw UsageError("no sequence named '" + name + "'");
}

void add_common(CLI::App* app, Common& c, bool with_format = true) {
  if (with_format) app->add_option("--format", c.format, "csv, json or svg")->capture_default_str();
  app->add_option("-o,--output", c.output, "output file (default: stdout)");
  app->add_option("--preset", c.preset, "register preset: natural-sample, enriched-sample")->capture_default_str();
  app->add_option("--system", c.system_file, ".nvs file whose system block defines the register");
  app->add_option("--relaxation", c.relaxation, "none, lindblad or static_ensemble")->capture_default_str();
  app->add_option("--samples", c.samples, "static-ensemble size")->capture_default_str();
  app->add_option("--seed", c.seed, "seed for sampled ensembles")->capture_default_str();
  app->add_flag("--serial", c.serial, "use the serial reference kernels");
}

StandardKind gate_kind(const std::string& gate) {
  if (gate == "U1") return StandardKind::u1;
  if (gate == "U2") return StandardKind::u2;
  if (gate == "CNOT1") return StandardKind::cnot1_13c;
  if (gate == "CNOT2") return StandardKind::cnot2_13c;
  return standard_kind_from_string(gate);
}

// ---------------------------------------------------------------------------

int cmd_run(const Common& c, const std::string& input, const std::string& seq_name) {
  const auto parsed = parse_file(input);
  const RegisterSpec spec = parsed.spec.value_or(RegisterSpec::natural_sample());
  const RelaxationModel model = make_model(c, spec);
  nlohmann::json out = nlohmann::json::array();
  std::string csv = "program,state,population\n";
  for (const auto& prog : parsed.programs) {
    if (!seq_name.empty() && prog.name != seq_name) continue;
    const Operator rho = evolve_density_through_sequence(initial_state(spec, prog.frame), prog, spec, model, c.exec());
    const auto labels = state_space(spec, prog.frame).labels();
    nlohmann::json pops = nlohmann::json::object();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double p = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      pops[labels[i]] = report::rounded(p);
      csv += prog.name + "," + labels[i] + "," + report::format_number(p) + "\n";
    }
    out.push_back({{"program", prog.name},
                   {"duration_us", report::rounded(total_duration(prog))},
                   {"p_ms0", report::rounded(ms0_population(rho, spec, prog.frame))},
                   {"populations", pops},
                   {"relaxation", to_string(model.mode)}});
  }
  if (out.empty()) throw UsageError("no sequence named '" + seq_name + "'");
  if (c.format == "csv") emit(c, csv);
  else if (c.format == "json") emit(c, report::dump(out));
  else throw UsageError("run supports csv and json output");
  return kExitOk;
}

struct SpectrumOpts {
  std::string input;
  std::string sequence;
  std::string gate;
  double t_max_us = 10.0;
  double dt_us = 0.02;
  double detuning_MHz = 5.0;
  double readout_rabi_MHz = 0.0;
  std::string manifold = "minus_one";
};

int cmd_spectrum(const Common& c, const SpectrumOpts& o) {
  RegisterSpec spec = load_register(c);
  SequenceProgram prep;
  if (!o.input.empty()) {
    const auto parsed = parse_file(o.input);
    if (parsed.spec) spec = *parsed.spec;
    prep = pick_program(parsed, o.sequence);
  } else if (!o.gate.empty()) {
    prep = build_standard_sequence(gate_kind(o.gate), spec);
  } else {
    prep.frame.subspace = manifold_from_string(o.manifold);
  }
  RamseyParams rp;
  rp.t_max_us = o.t_max_us;
  rp.dt_us = o.dt_us;
  rp.detuning_MHz = o.detuning_MHz;
  if (o.readout_rabi_MHz > 0.0) rp.rabi_MHz = o.readout_rabi_MHz;
  rp.manifold = prep.elements.empty() ? manifold_from_string(o.manifold) : prep.frame.subspace;
  auto r = ramsey_spectrum(prep, spec, make_model(c, spec), rp, c.exec());
  if (c.format == "svg") {
    // Stems at the picked lines read better than the full spectrum.
    ExperimentResult stems = r;
    stems.axis.points.clear();
    stems.values.clear();
    for (const auto& p : r.peaks) stems.axis.points.push_back(p.position), stems.values.push_back(p.amplitude);
    if (stems.values.empty()) stems = r;
    emit_result(c, stems, report::ChartStyle::stem);
    return kExitOk;
  }
  emit_result(c, r, report::ChartStyle::line);
  return kExitOk;
}

struct SweepOpts {
  std::string carrier = "2810MHz..2830MHz";
  int steps = 201;
  double rabi_MHz = 0.0;
  double tau_us = 0.0;
  std::string frame = "minus_one";
};

int cmd_sweep(const Common& c, const SweepOpts& o) {
  const auto dots = o.carrier.find("..");
  if (dots == std::string::npos) throw UsageError("--carrier expects FROM..TO, e.g. 2810MHz..2830MHz");
  const double from = lang::parse_frequency_MHz(o.carrier.substr(0, dots));
  const double to = lang::parse_frequency_MHz(o.carrier.substr(dots + 2));
  if (o.steps < 1) throw UsageError("--steps must be positive");
  const RegisterSpec spec = load_register(c);
  SweepParams p;
  p.carriers_MHz = linspace(from, to, o.steps);
  p.frame = manifold_from_string(o.frame);
  if (o.rabi_MHz > 0.0) p.rabi_MHz = o.rabi_MHz;
  if (o.tau_us > 0.0) p.tau_us = o.tau_us;
  p.model = make_model(c, spec);
  emit_result(c, offset_sweep(spec, p, c.exec()), report::ChartStyle::line);
  return kExitOk;
}

struct RabiOpts {
  std::string transfer = "pulsed";
  double rf_rabi_kHz = 8.2;
  double t_max_ms = 0.3;
  int steps = 61;
  bool no_carbon = false;
  bool fit = false;
};

int cmd_rabi(const Common& c, const RabiOpts& o) {
  RegisterSpec spec = load_register(c);
  if (o.no_carbon) spec.carbon_present = false;
  NutationParams np;
  if (o.transfer == "pulsed") np.transfer = TransferKind::pulsed;
  else if (o.transfer == "selective") np.transfer = TransferKind::selective;
  else throw UsageError("--transfer must be pulsed or selective");
  np.rf_rabi_kHz = o.rf_rabi_kHz;
  np.t_grid_ms = linspace(0.0, o.t_max_ms, o.steps);
  np.model = make_model(c, spec);
  auto r = rabi_nutation(spec, np, c.exec());
  if (o.fit) {
    const auto f = fit::fit_cosine(r.axis.points, r.values);
    for (const auto& p : f.params) r.metadata["fit_" + p.name] = report::format_number(p.value);
  }
  emit_result(c, r, report::ChartStyle::line);
  return kExitOk;
}

int cmd_truth_table(const Common& c, const std::string& gate, double rabi_MHz) {
  const StandardKind kind = gate_kind(gate);
  RegisterSpec spec = c.system_file.empty() && c.preset == "natural-sample" &&
                              (kind == StandardKind::cnot1_13c || kind == StandardKind::cnot2_13c)
                          ? RegisterSpec::enriched_sample()
                          : load_register(c);
  StandardParams sp;
  sp.ideal_pulses = rabi_MHz <= 0.0;
  if (rabi_MHz > 0.0) sp.hard_rabi_MHz = sp.cnot13_rabi_MHz = rabi_MHz;
  const auto prog = build_standard_sequence(kind, spec, sp);
  const Operator u = sequence_propagator(prog, spec);
  TruthTable table;
  if (kind == StandardKind::cnot1_13c || kind == StandardKind::cnot2_13c) {
    const auto e = embed_electron_carbon(u, spec, prog.frame.subspace);
    table = truth_table(e.u, e.labels);
  } else {
    table = truth_table(u, state_space(spec, prog.frame).labels());
  }
  if (c.format == "csv") emit(c, report::truth_table_csv(table));
  else if (c.format == "json") emit(c, report::dump(report::to_json(table)));
  else throw UsageError("truth-table supports csv and json output");
  return kExitOk;
}

int cmd_fidelity(const Common& c, const std::string& gate, double rabi_MHz, bool compensate) {
  const StandardKind kind = gate_kind(gate);
  const bool carbon_gate = kind == StandardKind::cnot1_13c || kind == StandardKind::cnot2_13c;
  const RegisterSpec spec = c.system_file.empty() && c.preset == "natural-sample" && carbon_gate
                                ? RegisterSpec::enriched_sample()
                                : load_register(c);
  StandardParams ideal;
  ideal.ideal_pulses = true;
  StandardParams finite;
  finite.compensate_pulse_delay = compensate;
  if (rabi_MHz > 0.0) finite.hard_rabi_MHz = finite.cnot13_rabi_MHz = rabi_MHz;
  const auto target_prog = build_standard_sequence(kind, spec, ideal);
  const auto prog = build_standard_sequence(kind, spec, finite);
  const Operator target = sequence_propagator(target_prog, spec);
  const Operator actual = sequence_propagator(prog, spec);
  const StateSpace space = state_space(spec, prog.frame);
  std::vector<int> slice;
  for (int i = 0; i < space.dim(); ++i)
    if (!carbon_gate || space.state(i).mi == 1) slice.push_back(i);
  const RelaxationModel model = make_model(c, spec);
  auto inputs = flipped_inputs(target, space);
  if (carbon_gate)
    std::erase_if(inputs, [&](int i) { return space.state(i).mi != 1; });
  const double pop = population_fidelity(
      [&](const Operator& rho) { return evolve_density_through_sequence(rho, prog, spec, model, c.exec()); }, target,
      inputs);
  nlohmann::json j = {{"gate", gate},
                      {"duration_us", report::rounded(total_duration(prog))},
                      {"process_fidelity", report::rounded(process_fidelity(actual, target, slice))},
                      {"population_fidelity", report::rounded(pop)},
                      {"relaxation", to_string(model.mode)},
                      {"compensate_pulse_delay", compensate}};
  emit(c, report::dump(j));
  return kExitOk;
}

int cmd_fit(const Common& c, const std::string& model, const std::string& input) {
  const auto data = report::read_two_column_csv(input);
  fit::FitResult r;
  if (model == "cosine") r = fit::fit_cosine(data.x, data.y);
  else if (model == "stretched_exp") r = fit::fit_stretched_exp(data.x, data.y);
  else throw UsageError("--model must be cosine or stretched_exp");
  emit(c, report::dump(report::to_json(r)));
  return kExitOk;
}

int cmd_repro(const Common& c, const std::string& tag, const std::string& out_dir, const std::string& config) {
  namespace fs = std::filesystem;
  const auto cfg = repro::load_config(config.empty() ? repro::default_config_path() : fs::path(config));
  std::vector<std::string> tags;
  if (tag == "all") tags = repro::tags();
  else tags = {tag};
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw report::IoError("cannot create " + out_dir);
  bool all_pass = true;
  for (const auto& t : tags) {
    const auto rep = repro::reproduce(t, cfg, c.exec());
    for (const auto& s : rep.series) {
      const fs::path base = fs::path(out_dir) / s.name;
      report::write_atomic(base.string() + ".csv", report::to_csv(s.result));
      report::write_atomic(base.string() + ".svg", report::svg_chart(s.result, s.style));
    }
    for (const auto& [name, table] : rep.tables)
      report::write_atomic(fs::path(out_dir) / (t + "_" + name + ".csv"), report::truth_table_csv(table));
    report::write_atomic(fs::path(out_dir) / (t + "_summary.json"), report::dump(rep.summary()));
    for (const auto& chk : rep.checks)
      std::printf("%s %s: %s = %s in [%s, %s]\n", chk.pass() ? "PASS" : "FAIL", t.c_str(), chk.name.c_str(),
                  report::format_number(chk.value).c_str(), report::format_number(chk.lo).c_str(),
                  report::format_number(chk.hi).c_str());
    std::printf("%s %s: physicality (%d states, %d propagators)\n", rep.physicality.ok() ? "PASS" : "FAIL", t.c_str(),
                rep.physicality.densities, rep.physicality.unitaries);
    all_pass = all_pass && rep.passed();
  }
  return all_pass ? kExitOk : kExitDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nvsim: NV-centre register simulator"};
  app.require_subcommand(1);
  Common common;

  auto* run = app.add_subcommand("run", "evolve the optically pumped state through .nvs sequences");
  std::string run_input, run_seq;
  add_common(run, common);
  run->add_option("input", run_input, ".nvs file")->required();
  run->add_option("--sequence", run_seq, "only this sequence");

  auto* spectrum = app.add_subcommand("spectrum", "Ramsey FID spectrum after a preparation sequence");
  SpectrumOpts so;
  add_common(spectrum, common);
  spectrum->add_option("input", so.input, ".nvs file with the preparation sequence");
  spectrum->add_option("--sequence", so.sequence, "sequence name in the input");
  spectrum->add_option("--gate", so.gate, "standard preparation: U1, U2, CNOT1, CNOT2");
  spectrum->add_option("--t-max-us", so.t_max_us)->capture_default_str();
  spectrum->add_option("--dt-us", so.dt_us)->capture_default_str();
  spectrum->add_option("--detuning-MHz", so.detuning_MHz)->capture_default_str();
  spectrum->add_option("--readout-rabi-MHz", so.readout_rabi_MHz, "0: ideal readout pulses");
  spectrum->add_option("--manifold", so.manifold, "minus_one or plus_one")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "(pi/2)_x - tau - (pi/2)_y carrier sweep");
  SweepOpts sw;
  add_common(sweep, common);
  sweep->add_option("--carrier", sw.carrier, "range FROM..TO with units")->capture_default_str();
  sweep->add_option("--steps", sw.steps)->capture_default_str();
  sweep->add_option("--rabi-MHz", sw.rabi_MHz, "0: ideal pulses");
  sweep->add_option("--tau-us", sw.tau_us, "0: 1/(2|A|)");
  sweep->add_option("--frame", sw.frame, "minus_one, plus_one or full")->capture_default_str();

  auto* rabi = app.add_subcommand("rabi", "14N Rabi nutation between two transfer sequences");
  RabiOpts ro;
  add_common(rabi, common);
  rabi->add_option("--transfer", ro.transfer, "pulsed or selective")->capture_default_str();
  rabi->add_option("--rf-rabi-kHz", ro.rf_rabi_kHz)->capture_default_str();
  rabi->add_option("--t-max-ms", ro.t_max_ms)->capture_default_str();
  rabi->add_option("--steps", ro.steps)->capture_default_str();
  rabi->add_flag("--no-carbon", ro.no_carbon, "drop the 13C spin from the register");
  rabi->add_flag("--fit", ro.fit, "attach a cosine fit to the metadata");

  auto* tt = app.add_subcommand("truth-table", "dominant output of every basis input");
  std::string tt_gate;
  double tt_rabi = 0.0;
  add_common(tt, common);
  tt->add_option("--gate", tt_gate, "U1, U2, CNOT1, CNOT2")->required();
  tt->add_option("--rabi-MHz", tt_rabi, "finite pulses (default ideal)");

  auto* fid = app.add_subcommand("fidelity", "process and population fidelity of a finite-pulse gate");
  std::string fid_gate;
  double fid_rabi = 0.0;
  bool fid_comp = false;
  add_common(fid, common, false);
  fid->add_option("--gate", fid_gate, "U1, U2, CNOT1, CNOT2")->required();
  fid->add_option("--rabi-MHz", fid_rabi, "pulse Rabi frequency (default per gate)");
  fid->add_flag("--compensate-delay", fid_comp, "shorten the free delay by 4 t_p / pi");

  auto* fitc = app.add_subcommand("fit", "fit a two-column CSV");
  std::string fit_model = "cosine", fit_input;
  add_common(fitc, common, false);
  fitc->add_option("--model", fit_model, "cosine or stretched_exp")->capture_default_str();
  fitc->add_option("input", fit_input, "CSV file")->required();

  auto* rep = app.add_subcommand("repro", "run a scripted reproduction scenario and its checks");
  std::string rep_tag, rep_dir = "repro_out", rep_config;
  add_common(rep, common, false);
  rep->add_option("tag", rep_tag, "table1, table3, eq9, fig7, fig8, fig9-selective, table2-trend, timing, all")
      ->required();
  rep->add_option("--out-dir", rep_dir)->capture_default_str();
  rep->add_option("--config", rep_config, "parameter file (default: shipped repro.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitDiagnostics;
  }

  try {
    if (*run) return cmd_run(common, run_input, run_seq);
    if (*spectrum) return cmd_spectrum(common, so);
    if (*sweep) return cmd_sweep(common, sw);
    if (*rabi) return cmd_rabi(common, ro);
    if (*tt) return cmd_truth_table(common, tt_gate, tt_rabi);
    if (*fid) return cmd_fidelity(common, fid_gate, fid_rabi, fid_comp);
    if (*fitc) return cmd_fit(common, fit_model, fit_input);
    if (*rep) return cmd_repro(common, rep_tag, rep_dir, rep_config);
  } catch (const report::IoError& e) {
    std::cerr << "nvsim: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "nvsim: " << e.what() << "\n";
    return kExitDiagnostics;
  }
  return kExitOk;
}
