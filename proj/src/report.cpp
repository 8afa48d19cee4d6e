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

#include "nvsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nvsim::report {

namespace {

std::string axis_header(const std::string& name, const std::string& unit) {
  return unit.empty() ? name : name + " [" + unit + "]";
}

// Short tick labels; ticks never need 12 digits.
std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round-number tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) out.push_back(t);
  return out;
}

std::pair<double, double> padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

double rounded(double v) {
  if (!std::isfinite(v)) return v;
  double out = 0.0;
  const std::string s = format_number(v);
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::string to_csv(const ExperimentResult& r) {
  r.validate();
  std::string out = axis_header(r.axis.name, r.axis.unit) + "," + axis_header(r.value_name, r.value_unit) + "\n";
  for (std::size_t i = 0; i < r.values.size(); ++i)
    out += format_number(r.axis.points[i]) + "," + format_number(r.values[i]) + "\n";
  return out;
}

std::string peaks_csv(const ExperimentResult& r) {
  std::string out = axis_header("position", r.axis.unit) + ",amplitude,magnitude\n";
  for (const Peak& p : r.peaks)
    out += format_number(p.position) + "," + format_number(p.amplitude) + "," + format_number(p.magnitude) + "\n";
  return out;
}

std::string truth_table_csv(const TruthTable& t) {
  std::string out = "input,output,population,tie\n";
  for (const auto& row : t.rows)
    out += row.input + "," + row.output + "," + format_number(row.population) + "," + (row.tie ? "1" : "0") + "\n";
  return out;
}

nlohmann::json to_json(const ExperimentResult& r) {
  r.validate();
  nlohmann::json j;
  j["axis"] = {{"name", r.axis.name}, {"unit", r.axis.unit}, {"points", nlohmann::json::array()}};
  for (double x : r.axis.points) j["axis"]["points"].push_back(rounded(x));
  j["value"] = {{"name", r.value_name}, {"unit", r.value_unit}, {"values", nlohmann::json::array()}};
  for (double y : r.values) j["value"]["values"].push_back(rounded(y));
  j["metadata"] = nlohmann::json::object();
  for (const auto& [k, v] : r.metadata) j["metadata"][k] = v;
  j["peaks"] = nlohmann::json::array();
  for (const Peak& p : r.peaks)
    j["peaks"].push_back(
        {{"position", rounded(p.position)}, {"amplitude", rounded(p.amplitude)}, {"magnitude", rounded(p.magnitude)}});
  return j;
}

nlohmann::json to_json(const fit::FitResult& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["residual_norm"] = rounded(r.residual_norm);
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["identifiable"] = r.identifiable;
  j["params"] = nlohmann::json::object();
  for (const auto& p : r.params) j["params"][p.name] = {{"value", rounded(p.value)}, {"std_error", rounded(p.std_error)}};
  return j;
}

nlohmann::json to_json(const TruthTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows)
    rows.push_back({{"input", row.input}, {"output", row.output}, {"population", rounded(row.population)},
                    {"tie", row.tie}});
  return {{"rows", rows}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

ChartStyle chart_style_from_string(const std::string& s) {
  if (s == "line") return ChartStyle::line;
  if (s == "stem") return ChartStyle::stem;
  throw std::invalid_argument("unknown chart style '" + s + "' (line, stem)");
}

std::string svg_chart(const ExperimentResult& r, ChartStyle style) {
  r.validate();
  if (r.values.empty()) throw std::invalid_argument("svg_chart: empty result");
  constexpr double kWidth = 640.0, kHeight = 400.0;
  constexpr double kLeft = 70.0, kRight = 20.0, kTop = 30.0, kBottom = 50.0;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;

  const auto [xmin_it, xmax_it] = std::minmax_element(r.axis.points.begin(), r.axis.points.end());
  auto [ymin, ymax] = std::pair(*std::min_element(r.values.begin(), r.values.end()),
                                *std::max_element(r.values.begin(), r.values.end()));
  if (style == ChartStyle::stem) {
    ymin = std::min(ymin, 0.0);
    ymax = std::max(ymax, 0.0);
  }
  const auto [x0, x1] = padded_range(*xmin_it, *xmax_it);
  const auto [y0, y1] = padded_range(ymin, ymax);
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  auto title = r.metadata.find("title");
  if (title != r.metadata.end())
    os << "<text x=\"" << coord(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"13\">" << xml_escape(title->second) << "</text>\n";

  // Axes and ticks.
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop + ph) << "\" x2=\"" << coord(kLeft + pw) << "\" y2=\""
     << coord(kTop + ph) << "\"/>\n"
     << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop) << "\" x2=\"" << coord(kLeft) << "\" y2=\""
     << coord(kTop + ph) << "\"/>\n";
  const auto xt = ticks(x0, x1), yt = ticks(y0, y1);
  for (double t : xt)
    os << "<line x1=\"" << coord(sx(t)) << "\" y1=\"" << coord(kTop + ph) << "\" x2=\"" << coord(sx(t)) << "\" y2=\""
       << coord(kTop + ph + 5) << "\"/>\n";
  for (double t : yt)
    os << "<line x1=\"" << coord(kLeft - 5) << "\" y1=\"" << coord(sy(t)) << "\" x2=\"" << coord(kLeft) << "\" y2=\""
       << coord(sy(t)) << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : xt)
    os << "<text x=\"" << coord(sx(t)) << "\" y=\"" << coord(kTop + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(t) << "</text>\n";
  for (double t : yt)
    os << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(sy(t) + 4) << "\" text-anchor=\"end\">"
       << tick_label(t) << "</text>\n";
  os << "<text x=\"" << coord(kLeft + pw / 2) << "\" y=\"" << coord(kHeight - 10) << "\" text-anchor=\"middle\">"
     << xml_escape(axis_header(r.axis.name, r.axis.unit)) << "</text>\n"
     << "<text x=\"15\" y=\"" << coord(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << coord(kTop + ph / 2) << ")\">" << xml_escape(axis_header(r.value_name, r.value_unit)) << "</text>\n"
     << "</g>\n";

  if (style == ChartStyle::line) {
    os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < r.values.size(); ++i)
      os << (i ? " " : "") << coord(sx(r.axis.points[i])) << "," << coord(sy(r.values[i]));
    os << "\"/>\n";
  } else {
    const double base = sy(0.0);
    os << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(base) << "\" x2=\"" << coord(kLeft + pw) << "\" y2=\""
       << coord(base) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n"
       << "<g stroke=\"#1f5fa8\" stroke-width=\"1.5\">\n";
    for (std::size_t i = 0; i < r.values.size(); ++i)
      os << "<line x1=\"" << coord(sx(r.axis.points[i])) << "\" y1=\"" << coord(base) << "\" x2=\""
         << coord(sx(r.axis.points[i])) << "\" y2=\"" << coord(sy(r.values[i])) << "\"/>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("output directory does not exist: " + dir.string());
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into place: " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

TwoColumn read_two_column_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  TwoColumn out{"x", "y", {}, {}};
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto c1 = line.find(',');
    if (c1 == std::string::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    const auto c2 = line.find(',', c1 + 1);
    const std::string a = line.substr(0, c1);
    const std::string b = line.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
    double x = 0.0, y = 0.0;
    if (!parse_double(a, x) || !parse_double(b, y)) {
      if (out.x.empty() && line_no == 1) {
        out.x_name = a;
        out.y_name = b;
        continue;
      }
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": non-numeric value");
    }
    out.x.push_back(x);
    out.y.push_back(y);
  }
  return out;
}

}  // namespace nvsim::report
