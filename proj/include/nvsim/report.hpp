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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nvsim/fitkit.hpp"
#include "nvsim/observe.hpp"

namespace nvsim::report {

/// File-system failure (missing input, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits, "C" locale, no trailing zeros.
std::string format_number(double v);
/// Round a value to what format_number prints, so JSON output is stable.
double rounded(double v);

/// Header "axis [unit],value [unit]" then one row per point; LF endings.
std::string to_csv(const ExperimentResult& r);
/// position,amplitude,magnitude rows for the picked peaks.
std::string peaks_csv(const ExperimentResult& r);
std::string truth_table_csv(const TruthTable& t);

nlohmann::json to_json(const ExperimentResult& r);
nlohmann::json to_json(const fit::FitResult& r);
nlohmann::json to_json(const TruthTable& t);
/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string dump(const nlohmann::json& j);

enum class ChartStyle { line, stem };
ChartStyle chart_style_from_string(const std::string& s);

/// Self-contained SVG 1.1 plot with axes, ticks and either one polyline
/// (line) or one stem per point from the zero baseline (stem). Output bytes
/// depend only on the input. Throws std::invalid_argument on empty results.
std::string svg_chart(const ExperimentResult& r, ChartStyle style);

/// Write to `path` through a temporary file in the same directory and a
/// rename, so readers never see a partial file. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

struct TwoColumn {
  std::string x_name;
  std::string y_name;
  std::vector<double> x;
  std::vector<double> y;
};
/// Reads a CSV whose first two columns are numeric; an optional non-numeric
/// first line is taken as the header. Throws IoError or std::invalid_argument.
TwoColumn read_two_column_csv(const std::filesystem::path& path);

}  // namespace nvsim::report
