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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nvsim/observe.hpp"
#include "nvsim/report.hpp"

namespace nvsim::repro {

/// One quantitative comparison; passes when lo <= value <= hi.
struct Check {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass() const { return value >= lo && value <= hi; }
};

/// Worst-case physicality seen over every state and propagator a scenario
/// produced.
struct Physicality {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;
  double max_unitarity_error = 0.0;
  int densities = 0;
  int unitaries = 0;

  void add_density(const Operator& rho);
  void add_unitary(const Operator& u);
  void merge(const Physicality& other);
  /// Density tolerance 1e-8, unitarity tolerance 1e-10.
  bool ok() const;
};

struct Series {
  std::string name;
  ExperimentResult result;
  report::ChartStyle style = report::ChartStyle::line;
};

struct Report {
  std::string tag;
  std::vector<Series> series;
  std::vector<std::pair<std::string, TruthTable>> tables;
  std::vector<Check> checks;
  Physicality physicality;

  bool passed() const;
  /// Deterministic summary (no timings).
  nlohmann::json summary() const;
};

const std::vector<std::string>& tags();

std::filesystem::path default_config_path();
/// Throws report::IoError when the file is missing, std::invalid_argument on
/// malformed JSON.
nlohmann::json load_config(const std::filesystem::path& path = default_config_path());

/// Run the scripted experiment for `tag` with the parameters in config[tag].
/// Throws std::invalid_argument for unknown tags.
Report reproduce(const std::string& tag, const nlohmann::json& config, Execution exec = Execution::parallel);

/// Selective-pi fidelity: mean probability of the m_I = 0 ESR swap over the
/// inputs it flips, under `model`.
double selective_pi_fidelity(const RegisterSpec& spec, double rabi_MHz, const RelaxationModel& model,
                             Physicality* phys = nullptr);

}  // namespace nvsim::repro
