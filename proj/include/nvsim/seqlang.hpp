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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvsim/sequence.hpp"
#include "nvsim/spinmodel.hpp"

namespace nvsim::lang {

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 1;
};

enum class Severity { error, warning };

struct ParseDiagnostic {
  Severity severity = Severity::error;
  std::string message;
  SourceSpan span;
};

/// "file:line:col: error: message" (file omitted when empty).
std::string format_diagnostic(const ParseDiagnostic& d, const std::string& file = {});

struct ParseResult {
  std::optional<RegisterSpec> spec;
  std::vector<SequenceProgram> programs;
  std::vector<ParseDiagnostic> diagnostics;

  bool has_errors() const;
};

/// Parse an `.nvs` document.
///
///   # comment
///   system {
///     preset = natural
///     field = 1.8mT
///     carbon { azz = 150kHz }
///   }
///   sequence u1 {
///     frame manifold = minus_one carrier = esr(0,-1)
///     mw pulse carrier = esr(0,-1) - 1.08MHz rabi = 10MHz flip = 90deg phase = 0deg
///     delay 231.48ns
///     mw pulse carrier = esr(0,-1) - 1.08MHz rabi = 10MHz flip = 90deg phase = 90deg
///   }
///
/// Every physical number needs a unit (MHz, kHz, GHz, ns, us, ms, mT, deg,
/// MHz/mT, kHz/mT) unless the key itself ends in one (`rabi_MHz = 10`).
/// Symbolic carriers `esr(ms_a,ms_b)`, `esr(ms_a,ms_b,m_I)` and
/// `nmr(m_S: m_I_a,m_I_b)` are resolved against the system block, or the
/// natural-sample register when there is none. Programs are emitted only
/// when the document has no errors. Never throws.
ParseResult parse(std::string_view source);

/// Single quantities with mandatory units, e.g. "2.5MHz", "-4.95MHz",
/// "231.48ns". Results are in MHz and us. Throw std::invalid_argument.
double parse_frequency_MHz(std::string_view text);
double parse_time_us(std::string_view text);

/// Canonical text of a program; parse() of the result reproduces it exactly.
std::string to_canonical_text(const SequenceProgram& prog);
/// Canonical `system` block for a register.
std::string to_canonical_text(const RegisterSpec& spec);

}  // namespace nvsim::lang
