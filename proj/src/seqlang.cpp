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

#include "nvsim/seqlang.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <limits>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>
#include <variant>

namespace nvsim::lang {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { ident, number, quantity, string, lbrace, rbrace, lparen, rparen, comma, colon, equals, plus, minus,
                 newline, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;  // identifier, string contents or unit
  double number = 0.0;
  SourceSpan span;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<ParseDiagnostic>& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '\n') {
        out.push_back(make(Tok::newline, 1));
        advance();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
        out.push_back(number());
      } else if (is_ident_start(c)) {
        Token t = make(Tok::ident, 0);
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.span.length = static_cast<int>(pos_ - start);
        out.push_back(t);
      } else if (c == '"') {
        out.push_back(string());
      } else {
        Tok kind;
        switch (c) {
          case '{': kind = Tok::lbrace; break;
          case '}': kind = Tok::rbrace; break;
          case '(': kind = Tok::lparen; break;
          case ')': kind = Tok::rparen; break;
          case ',': kind = Tok::comma; break;
          case ':': kind = Tok::colon; break;
          case '=': kind = Tok::equals; break;
          case '+': kind = Tok::plus; break;
          case '-': kind = Tok::minus; break;
          default:
            diags_.push_back({Severity::error, std::string("unexpected character '") + c + "'", make(Tok::end, 1).span});
            advance();
            continue;
        }
        out.push_back(make(kind, 1));
        advance();
      }
    }
    Token end = make(Tok::end, 1);
    out.push_back(end);
    return out;
  }

 private:
  Token make(Tok kind, int length) const {
    Token t;
    t.kind = kind;
    t.span = {line_, column_, std::max(1, length)};
    return t;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  Token number() {
    Token t = make(Tok::number, 0);
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '.')) advance();
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && is_digit(src_[look])) {
        while (pos_ < look) advance();
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
      }
    }
    const std::string_view digits = src_.substr(start, pos_ - start);
    // from_chars ignores the locale, so '.' is always the decimal point.
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.number);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      diags_.push_back({Severity::error, "malformed number '" + std::string(digits) + "'",
                        {t.span.line, t.span.column, static_cast<int>(digits.size())}});
    const std::size_t unit_start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ < src_.size() && src_[pos_] == '/' && pos_ > unit_start) {
      advance();
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    if (pos_ > unit_start) {
      t.kind = Tok::quantity;
      t.text = std::string(src_.substr(unit_start, pos_ - unit_start));
    }
    t.span.length = static_cast<int>(pos_ - start);
    return t;
  }

  Token string() {
    Token t = make(Tok::string, 0);
    const std::size_t start = pos_;
    advance();
    while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') t.text += src_[pos_], advance();
    if (pos_ < src_.size() && src_[pos_] == '"') {
      advance();
    } else {
      diags_.push_back({Severity::error, "unterminated string", t.span});
    }
    t.span.length = static_cast<int>(pos_ - start);
    return t;
  }

  std::string_view src_;
  std::vector<ParseDiagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------------------
// Units

enum class Dim { frequency, time, field, angle, gyro };

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::frequency: return "a frequency (GHz, MHz, kHz, Hz)";
    case Dim::time: return "a time (ms, us, ns)";
    case Dim::field: return "a field (T, mT, G)";
    case Dim::angle: return "an angle (deg, rad)";
    case Dim::gyro: return "a gyromagnetic ratio (MHz/mT, kHz/mT)";
  }
  return "";
}

struct UnitInfo {
  Dim dim;
  double scale;  // to MHz, us, mT, deg, MHz/mT
};

const std::map<std::string, UnitInfo>& unit_table() {
  static const std::map<std::string, UnitInfo> table = {
      {"GHz", {Dim::frequency, 1e3}},     {"MHz", {Dim::frequency, 1.0}},    {"kHz", {Dim::frequency, 1e-3}},
      {"Hz", {Dim::frequency, 1e-6}},     {"ms", {Dim::time, 1e3}},          {"us", {Dim::time, 1.0}},
      {"ns", {Dim::time, 1e-3}},          {"T", {Dim::field, 1e3}},          {"mT", {Dim::field, 1.0}},
      {"G", {Dim::field, 0.1}},           {"deg", {Dim::angle, 1.0}},        {"rad", {Dim::angle, 180.0 / kPi}},
      {"MHz/mT", {Dim::gyro, 1.0}},       {"kHz/mT", {Dim::gyro, 1e-3}},
  };
  return table;
}

// ---------------------------------------------------------------------------
// Parsed values

struct CarrierExpr {
  enum class Base { literal, esr, nmr } base = Base::literal;
  std::vector<int> args;  // esr: ms_a, ms_b[, mi]; nmr: ms, mi_a, mi_b
  double offset_MHz = 0.0;
  SourceSpan span;
};

struct Value {
  enum class Kind { quantity, number, ident, string, expr } kind = Kind::number;
  double number = 0.0;
  std::string unit;
  std::string text;
  CarrierExpr expr;
  SourceSpan span;
};

struct Entry {
  std::string key;
  SourceSpan key_span;
  Value value;
};

struct PendingPulse {
  Pulse pulse;
  std::optional<CarrierExpr> carrier;
  SourceSpan span;
};

struct PendingSequence {
  std::string name;
  SourceSpan span;
  Manifold manifold = Manifold::minus_one;
  std::optional<CarrierExpr> carrier;
  std::optional<CarrierExpr> rf_carrier;
  std::vector<std::variant<PendingPulse, Delay>> elements;
};

SourceSpan merge(const SourceSpan& a, const SourceSpan& b) {
  if (a.line != b.line) return a;
  return {a.line, a.column, std::max(1, b.column + b.length - a.column)};
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diags) : toks_(std::move(tokens)), diags_(diags) {}

  void document() {
    for (;;) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Tok::end) return;
      if (t.kind == Tok::ident && t.text == "system") {
        system_block();
      } else if (t.kind == Tok::ident && t.text == "sequence") {
        sequence_block();
      } else {
        error("expected 'system' or 'sequence' block", t.span);
        take();
        recover_line();
      }
    }
  }

  std::vector<Entry> system_entries;
  std::map<std::string, std::vector<Entry>> nested;  // carbon, relaxation
  std::optional<SourceSpan> system_span;
  std::vector<PendingSequence> sequences;

 private:
  const Token& peek(int ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    take();
    return true;
  }
  bool expect(Tok k, const char* what) {
    if (accept(k)) return true;
    error(std::string("expected ") + what, peek().span);
    return false;
  }
  void skip_newlines() {
    while (peek().kind == Tok::newline) take();
  }
  void recover_line() {
    while (peek().kind != Tok::newline && peek().kind != Tok::end && peek().kind != Tok::rbrace) take();
  }
  // After a block-level error: skip to the matching close brace.
  void recover_block() {
    int depth = 0;
    while (peek().kind != Tok::end) {
      if (peek().kind == Tok::lbrace) ++depth;
      if (peek().kind == Tok::rbrace) {
        if (depth == 0) break;
        --depth;
      }
      take();
    }
  }
  void error(std::string msg, SourceSpan span) { diags_.push_back({Severity::error, std::move(msg), span}); }

  void system_block() {
    const Token kw = take();
    if (system_span) diags_.push_back({Severity::warning, "second system block overrides the first", kw.span});
    system_span = kw.span;
    system_entries.clear();
    nested.clear();
    if (!expect(Tok::lbrace, "'{' after 'system'")) {
      recover_line();
      return;
    }
    for (;;) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Tok::rbrace) {
        take();
        return;
      }
      if (t.kind == Tok::end) {
        error("unterminated system block", kw.span);
        return;
      }
      if (t.kind == Tok::ident && peek(1).kind == Tok::lbrace) {
        const Token name = take();
        take();
        if (name.text != "carbon" && name.text != "relaxation")
          diags_.push_back({Severity::warning, "unknown block '" + name.text + "' ignored", name.span});
        auto& list = nested[name.text];
        list.push_back({"", name.span, {}});  // marks block presence
        for (;;) {
          skip_newlines();
          if (accept(Tok::rbrace)) break;
          if (peek().kind == Tok::end) {
            error("unterminated '" + name.text + "' block", name.span);
            return;
          }
          if (auto e = entry()) list.push_back(*e);
        }
        continue;
      }
      if (auto e = entry()) system_entries.push_back(*e);
    }
  }

  std::optional<Entry> entry() {
    const Token& k = peek();
    if (k.kind != Tok::ident) {
      error("expected key", k.span);
      take();
      recover_line();
      return std::nullopt;
    }
    Entry e;
    e.key = take().text;
    e.key_span = k.span;
    if (!expect(Tok::equals, "'=' after key")) {
      recover_line();
      return std::nullopt;
    }
    auto v = value();
    if (!v) {
      recover_line();
      return std::nullopt;
    }
    e.value = *v;
    return e;
  }

  std::optional<int> signed_int() {
    const Token& first = peek();
    int sign = 1;
    if (accept(Tok::minus)) sign = -1;
    else accept(Tok::plus);
    const Token& t = peek();
    if (t.kind != Tok::number || t.number != std::floor(t.number)) {
      error("expected integer spin projection", t.span.line == first.span.line ? t.span : first.span);
      return std::nullopt;
    }
    take();
    return sign * static_cast<int>(t.number);
  }

  std::optional<CarrierExpr> symbolic(const Token& head) {
    CarrierExpr ex;
    ex.span = head.span;
    take();
    if (!expect(Tok::lparen, "'('")) return std::nullopt;
    if (head.text == "esr") {
      ex.base = CarrierExpr::Base::esr;
      for (int i = 0; i < 3; ++i) {
        if (i > 0 && !accept(Tok::comma)) {
          if (i == 2) break;
          error("expected ','", peek().span);
          return std::nullopt;
        }
        auto v = signed_int();
        if (!v) return std::nullopt;
        ex.args.push_back(*v);
      }
    } else {
      ex.base = CarrierExpr::Base::nmr;
      auto ms = signed_int();
      if (!ms || !expect(Tok::colon, "':' after m_S")) return std::nullopt;
      auto a = signed_int();
      if (!a || !expect(Tok::comma, "','")) return std::nullopt;
      auto b = signed_int();
      if (!b) return std::nullopt;
      ex.args = {*ms, *a, *b};
    }
    const Token close = peek();
    if (!expect(Tok::rparen, "')'")) return std::nullopt;
    ex.span = merge(head.span, close.span);
    return ex;
  }

  // value := ['-'] QUANTITY | ['-'] NUMBER | IDENT | STRING | carrier_expr
  std::optional<Value> value() {
    Value v;
    const Token& first = peek();
    v.span = first.span;
    if (first.kind == Tok::string) {
      v.kind = Value::Kind::string;
      v.text = take().text;
      return v;
    }
    if (first.kind == Tok::ident && (first.text == "esr" || first.text == "nmr") && peek(1).kind == Tok::lparen) {
      auto ex = symbolic(first);
      if (!ex) return std::nullopt;
      if (!offsets(*ex)) return std::nullopt;
      v.kind = Value::Kind::expr;
      v.expr = *ex;
      v.span = ex->span;
      return v;
    }
    if (first.kind == Tok::ident) {
      v.kind = Value::Kind::ident;
      v.text = take().text;
      return v;
    }
    double sign = 1.0;
    if (accept(Tok::minus)) sign = -1.0;
    else accept(Tok::plus);
    const Token& t = peek();
    if (t.kind != Tok::number && t.kind != Tok::quantity) {
      error("expected a value", t.span);
      return std::nullopt;
    }
    take();
    v.kind = t.kind == Tok::quantity ? Value::Kind::quantity : Value::Kind::number;
    v.number = sign * t.number;
    v.unit = t.text;
    v.span = merge(first.span, t.span);
    if (v.kind == Value::Kind::quantity && (peek().kind == Tok::plus || peek().kind == Tok::minus)) {
      // literal carrier with offsets, e.g. 2819.6MHz - 1.08MHz
      CarrierExpr ex;
      ex.span = v.span;
      const auto it = unit_table().find(v.unit);
      if (it == unit_table().end() || it->second.dim != Dim::frequency) {
        error("carrier arithmetic needs frequency units", v.span);
        return std::nullopt;
      }
      ex.offset_MHz = v.number * it->second.scale;
      if (!offsets(ex)) return std::nullopt;
      v.kind = Value::Kind::expr;
      v.expr = ex;
      v.span = ex.span;
    }
    return v;
  }

  bool offsets(CarrierExpr& ex) {
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const double sign = take().kind == Tok::minus ? -1.0 : 1.0;
      const Token& q = peek();
      if (q.kind == Tok::number) {
        error("missing unit on carrier offset", q.span);
        return false;
      }
      if (q.kind != Tok::quantity) {
        error("expected a frequency after '+'/'-'", q.span);
        return false;
      }
      take();
      const auto it = unit_table().find(q.text);
      if (it == unit_table().end() || it->second.dim != Dim::frequency) {
        error("carrier offset must be a frequency", q.span);
        return false;
      }
      ex.offset_MHz += sign * q.number * it->second.scale;
      ex.span = merge(ex.span, q.span);
    }
    return true;
  }

  void sequence_block() {
    const Token kw = take();
    PendingSequence seq;
    seq.span = kw.span;
    const Token& name = peek();
    if (name.kind == Tok::ident || name.kind == Tok::string) {
      seq.name = take().text;
      seq.span = name.span;
    } else {
      error("expected sequence name", name.span);
    }
    if (!expect(Tok::lbrace, "'{' after sequence name")) {
      recover_line();
      return;
    }
    for (;;) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Tok::rbrace) {
        take();
        break;
      }
      if (t.kind == Tok::end) {
        error("unterminated sequence block", kw.span);
        break;
      }
      if (t.kind != Tok::ident) {
        error("expected 'mw', 'rf', 'delay' or 'frame'", t.span);
        take();
        recover_line();
        continue;
      }
      element(seq);
      if (peek().kind != Tok::newline && peek().kind != Tok::rbrace && peek().kind != Tok::end) {
        error("unexpected token after element", peek().span);
        recover_line();
      }
    }
    sequences.push_back(std::move(seq));
  }

  std::vector<Entry> entries_to_eol() {
    std::vector<Entry> out;
    while (peek().kind != Tok::newline && peek().kind != Tok::rbrace && peek().kind != Tok::end) {
      if (auto e = entry()) out.push_back(*e);
    }
    return out;
  }

  void element(PendingSequence& seq) {
    const Token head = take();
    if (head.text == "delay") {
      const Token& q = peek();
      auto v = value();
      if (!v) {
        recover_line();
        return;
      }
      if (auto t = quantity(*v, "", Dim::time)) {
        if (*t < 0.0) error("delay must be non-negative", v->span);
        else seq.elements.push_back(Delay{*t});
      }
      (void)q;
      return;
    }
    if (head.text == "frame") {
      for (const Entry& e : entries_to_eol()) {
        const auto [base, _] = split_key(e.key);
        if (base == "manifold") {
          if (e.value.kind != Value::Kind::ident) {
            error("manifold must be minus_one, plus_one or full", e.value.span);
            continue;
          }
          try {
            seq.manifold = manifold_from_string(e.value.text);
          } catch (const std::exception&) {
            error("unknown manifold '" + e.value.text + "'", e.value.span);
          }
        } else if (base == "carrier" || base == "rf_carrier") {
          if (auto ex = carrier(e)) (base == "carrier" ? seq.carrier : seq.rf_carrier) = *ex;
        } else {
          warn_unknown(e);
        }
      }
      return;
    }
    if (head.text == "mw" || head.text == "rf") {
      if (!(peek().kind == Tok::ident && peek().text == "pulse")) {
        error("expected 'pulse' after '" + head.text + "'", peek().span);
        recover_line();
        return;
      }
      take();
      PendingPulse pp;
      pp.span = head.span;
      pp.pulse.channel = head.text == "mw" ? DriveChannel::mw : DriveChannel::rf;
      bool have_flip = false, have_rabi = false;
      const auto entries = entries_to_eol();
      if (entries.empty()) error("pulse needs key = value pairs", head.span);
      std::map<std::string, SourceSpan> seen;
      for (const Entry& e : entries) {
        const auto [base, _] = split_key(e.key);
        if (seen.count(base))
          diags_.push_back({Severity::warning, "duplicate key '" + base + "'; last value wins", e.key_span});
        seen[base] = e.key_span;
        if (base == "carrier") {
          pp.carrier = carrier(e);
        } else if (base == "rabi") {
          have_rabi = true;
          if (e.value.kind == Value::Kind::ident && e.value.text == "ideal") {
            pp.pulse.rabi_MHz.reset();
          } else if (auto r = quantity(e.value, e.key, Dim::frequency)) {
            if (!(*r > 0.0)) error("Rabi frequency must be positive", e.value.span);
            else pp.pulse.rabi_MHz = *r;
          }
        } else if (base == "flip") {
          have_flip = true;
          if (auto f = quantity(e.value, e.key, Dim::angle)) {
            const bool mw = pp.pulse.channel == DriveChannel::mw;
            if (!(*f > 0.0) || (mw && *f > 360.0))
              error(mw ? "flip angle must be in (0, 360] deg" : "flip angle must be positive", e.value.span);
            else pp.pulse.flip_deg = *f;
          }
        } else if (base == "phase") {
          if (auto p = quantity(e.value, e.key, Dim::angle)) pp.pulse.phase_deg = *p;
        } else if (base == "target" && pp.pulse.channel == DriveChannel::rf) {
          if (e.value.kind != Value::Kind::expr || e.value.expr.base != CarrierExpr::Base::nmr ||
              e.value.expr.offset_MHz != 0.0) {
            error("target must be nmr(m_S: m_I_a,m_I_b)", e.value.span);
          } else {
            const auto& a = e.value.expr.args;
            pp.pulse.target = NmrTarget{a[0], a[1], a[2]};
          }
        } else {
          warn_unknown(e);
        }
      }
      if (!have_flip) error("pulse is missing required key 'flip'", head.span);
      if (!have_rabi) error("pulse is missing required key 'rabi' (a frequency or 'ideal')", head.span);
      seq.elements.push_back(std::move(pp));
      return;
    }
    error("unknown element '" + head.text + "'", head.span);
    recover_line();
  }

  std::optional<CarrierExpr> carrier(const Entry& e) {
    if (e.value.kind == Value::Kind::expr) return e.value.expr;
    if (auto f = quantity(e.value, e.key, Dim::frequency)) {
      CarrierExpr ex;
      ex.offset_MHz = *f;
      ex.span = e.value.span;
      return ex;
    }
    return std::nullopt;
  }

  void warn_unknown(const Entry& e) {
    diags_.push_back({Severity::warning, "unknown key '" + e.key + "' ignored", e.key_span});
  }

 public:
  // "rabi_MHz" -> {"rabi", "MHz"}; "gamma_e_MHz_per_mT" -> {"gamma_e", "MHz/mT"}.
  static std::pair<std::string, std::string> split_key(const std::string& key) {
    for (const auto& [unit, info] : unit_table()) {
      std::string suffix = "_" + unit;
      if (const auto slash = suffix.find('/'); slash != std::string::npos) suffix.replace(slash, 1, "_per_");
      if (key.size() > suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
        return {key.substr(0, key.size() - suffix.size()), unit};
    }
    return {key, ""};
  }

  std::optional<double> quantity(const Value& v, const std::string& key, Dim dim) {
    std::string unit = v.unit;
    if (v.kind == Value::Kind::ident && v.text == "inf" && dim == Dim::time)
      return std::numeric_limits<double>::infinity();
    if (v.kind == Value::Kind::number) {
      unit = split_key(key).second;
      if (unit.empty()) {
        error("missing unit: expected " + std::string(dim_name(dim)), v.span);
        return std::nullopt;
      }
    } else if (v.kind != Value::Kind::quantity) {
      error("expected " + std::string(dim_name(dim)), v.span);
      return std::nullopt;
    }
    const auto it = unit_table().find(unit);
    if (it == unit_table().end()) {
      error("unknown unit '" + unit + "'", v.span);
      return std::nullopt;
    }
    if (it->second.dim != dim) {
      error("wrong unit '" + unit + "': expected " + std::string(dim_name(dim)), v.span);
      return std::nullopt;
    }
    return v.number * it->second.scale;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic>& diags_;
};

// ---------------------------------------------------------------------------
// Finalisation

struct Resolver {
  const RegisterSpec& spec;
  std::vector<ParseDiagnostic>& diags;

  std::optional<double> operator()(const CarrierExpr& ex) const {
    try {
      switch (ex.base) {
        case CarrierExpr::Base::literal: return ex.offset_MHz;
        case CarrierExpr::Base::esr: return esr(ex) + ex.offset_MHz;
        case CarrierExpr::Base::nmr: return nmr(ex) + ex.offset_MHz;
      }
    } catch (const std::exception& e) {
      diags.push_back({Severity::error, e.what(), ex.span});
    }
    return std::nullopt;
  }

  double esr(const CarrierExpr& ex) const {
    const int a = ex.args[0], b = ex.args[1];
    const int other = a == 0 ? b : (b == 0 ? a : 2);
    if (other != 1 && other != -1) throw std::invalid_argument("esr() needs one m_S = 0 level and one of +1, -1");
    const Manifold m = other == -1 ? Manifold::minus_one : Manifold::plus_one;
    if (ex.args.size() == 2) return manifold_center_MHz(spec, m);
    const int mi = ex.args[2];
    if (mi < -1 || mi > 1) throw std::invalid_argument("esr(): m_I must be -1, 0 or 1");
    return average_over_carbon([&](int mc2) {
      return std::abs(transition_energy_MHz(spec, {0, mi, mc2}, {other, mi, mc2}));
    });
  }

  double nmr(const CarrierExpr& ex) const {
    const int ms = ex.args[0], a = ex.args[1], b = ex.args[2];
    if (ms < -1 || ms > 1 || a < -1 || a > 1 || b < -1 || b > 1 || a == b)
      throw std::invalid_argument("nmr(): expected m_S in {-1,0,1} and two distinct m_I in {-1,0,1}");
    return average_over_carbon([&](int mc2) {
      return std::abs(transition_energy_MHz(spec, {ms, a, mc2}, {ms, b, mc2}));
    });
  }

  template <class F>
  double average_over_carbon(F&& f) const {
    if (!spec.carbon_present) return f(0);
    return 0.5 * (f(1) + f(-1));
  }
};

void apply_entry(RegisterSpec& spec, const Entry& e, const std::string& block, Parser& p,
                 std::vector<ParseDiagnostic>& diags) {
  const auto [base, _] = Parser::split_key(e.key);
  auto set = [&](double& field, Dim dim, double to_unit) {
    if (auto v = p.quantity(e.value, e.key, dim)) field = *v / to_unit;
  };
  if (block.empty()) {
    if (base == "preset") return;  // applied first
    if (base == "field") return set(spec.field_mT, Dim::field, 1.0);
    if (base == "zfs") return set(spec.zfs_MHz, Dim::frequency, 1.0);
    if (base == "quadrupole") return set(spec.quadrupole_MHz, Dim::frequency, 1.0);
    if (base == "hyperfine") return set(spec.hyperfine_MHz, Dim::frequency, 1.0);
    if (base == "gamma_e") return set(spec.gamma_e_MHz_per_mT, Dim::gyro, 1.0);
    if (base == "gamma_n14") return set(spec.gamma_n14_kHz_per_mT, Dim::gyro, 1e-3);
  } else if (block == "carbon") {
    if (base == "azz") return set(spec.azz_kHz, Dim::frequency, 1e-3);
    if (base == "azx") return set(spec.azx_kHz, Dim::frequency, 1e-3);
    if (base == "gamma") return set(spec.gamma_c13_kHz_per_mT, Dim::gyro, 1e-3);
    if (base == "present") {
      if (e.value.kind == Value::Kind::ident && (e.value.text == "true" || e.value.text == "false"))
        spec.carbon_present = e.value.text == "true";
      else
        diags.push_back({Severity::error, "present must be true or false", e.value.span});
      return;
    }
  } else if (block == "relaxation") {
    if (base == "t1_e") return set(spec.t1_e_ms, Dim::time, 1e3);
    if (base == "t2s_e") return set(spec.t2s_e_us, Dim::time, 1.0);
    if (base == "t2s_n") return set(spec.t2s_n_ms, Dim::time, 1e3);
  }
  diags.push_back({Severity::warning, "unknown key '" + e.key + "' ignored", e.key_span});
}

std::optional<RegisterSpec> build_spec(Parser& p, std::vector<ParseDiagnostic>& diags) {
  if (!p.system_span) return std::nullopt;
  RegisterSpec spec = RegisterSpec::natural_sample();
  for (const Entry& e : p.system_entries) {
    if (e.key != "preset") continue;
    if (e.value.kind != Value::Kind::ident && e.value.kind != Value::Kind::string) {
      diags.push_back({Severity::error, "preset must be a name", e.value.span});
      continue;
    }
    try {
      spec = RegisterSpec::preset(e.value.text);
    } catch (const std::exception& ex) {
      diags.push_back({Severity::error, ex.what(), e.value.span});
    }
  }
  const std::size_t before = diags.size();
  for (const Entry& e : p.system_entries) apply_entry(spec, e, "", p, diags);
  for (const auto& [block, entries] : p.nested) {
    if (block == "carbon") spec.carbon_present = true;
    for (const Entry& e : entries)
      if (!e.key.empty()) apply_entry(spec, e, block, p, diags);
  }
  const bool new_errors = std::any_of(diags.begin() + static_cast<std::ptrdiff_t>(before), diags.end(),
                                      [](const ParseDiagnostic& d) { return d.severity == Severity::error; });
  if (!new_errors) {
    try {
      spec.validate();
    } catch (const std::exception& ex) {
      diags.push_back({Severity::error, ex.what(), *p.system_span});
    }
  }
  return spec;
}

std::string number_text(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string quantity_text(double v, const char* unit) {
  if (std::isinf(v) && v > 0) return "inf";
  // Negative values are written with a leading '-' which the grammar reads
  // as a sign applied to the quantity.
  return number_text(v) + unit;
}

bool plain_ident(const std::string& s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

}  // namespace

namespace {

double parse_single(std::string_view text, Dim dim) {
  std::vector<ParseDiagnostic> diags;
  const auto toks = Lexer(text, diags).run();
  std::size_t i = 0;
  double sign = 1.0;
  if (toks[i].kind == Tok::minus || toks[i].kind == Tok::plus) sign = toks[i++].kind == Tok::minus ? -1.0 : 1.0;
  const Token& q = toks[i];
  const bool shape = diags.empty() && q.kind == Tok::quantity && toks[i + 1].kind == Tok::end;
  const auto it = shape ? unit_table().find(q.text) : unit_table().end();
  if (it == unit_table().end() || it->second.dim != dim)
    throw std::invalid_argument("'" + std::string(text) + "' is not " + dim_name(dim));
  return sign * q.number * it->second.scale;
}

}  // namespace

double parse_frequency_MHz(std::string_view text) { return parse_single(text, Dim::frequency); }
double parse_time_us(std::string_view text) { return parse_single(text, Dim::time); }

std::string format_diagnostic(const ParseDiagnostic& d, const std::string& file) {
  std::ostringstream os;
  if (!file.empty()) os << file << ':';
  os << d.span.line << ':' << d.span.column << ": " << (d.severity == Severity::error ? "error" : "warning") << ": "
     << d.message;
  return os.str();
}

bool ParseResult::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ParseDiagnostic& d) { return d.severity == Severity::error; });
}

ParseResult parse(std::string_view source) {
  ParseResult result;
  try {
    Lexer lexer(source, result.diagnostics);
    Parser parser(lexer.run(), result.diagnostics);
    parser.document();
    result.spec = build_spec(parser, result.diagnostics);

    const RegisterSpec resolve_spec = result.spec.value_or(RegisterSpec::natural_sample());
    const Resolver resolve{resolve_spec, result.diagnostics};
    std::map<std::string, int> names;
    for (const PendingSequence& seq : parser.sequences) {
      if (names[seq.name]++ > 0)
        result.diagnostics.push_back({Severity::warning, "duplicate sequence name '" + seq.name + "'", seq.span});
      SequenceProgram prog;
      prog.name = seq.name;
      prog.frame.subspace = seq.manifold;
      const Manifold centre_of = seq.manifold == Manifold::full ? Manifold::minus_one : seq.manifold;
      prog.frame.carrier_mw_MHz = manifold_center_MHz(resolve_spec, centre_of);
      if (seq.carrier)
        if (auto c = resolve(*seq.carrier)) prog.frame.carrier_mw_MHz = *c;
      if (seq.rf_carrier)
        if (auto c = resolve(*seq.rf_carrier)) prog.frame.carrier_rf_MHz = *c;
      bool symbolic = false;
      auto note_symbolic = [&](const std::optional<CarrierExpr>& ex) {
        if (ex && ex->base != CarrierExpr::Base::literal) symbolic = true;
      };
      note_symbolic(seq.carrier);
      note_symbolic(seq.rf_carrier);
      for (const auto& el : seq.elements) {
        if (const auto* d = std::get_if<Delay>(&el)) {
          prog.elements.push_back(*d);
          continue;
        }
        const auto& pp = std::get<PendingPulse>(el);
        Pulse p = pp.pulse;
        note_symbolic(pp.carrier);
        if (pp.carrier) {
          if (auto c = resolve(*pp.carrier)) p.carrier_MHz = *c;
        } else if (p.channel == DriveChannel::mw) {
          p.carrier_MHz = prog.frame.carrier_mw_MHz;
        } else if (seq.rf_carrier) {
          p.carrier_MHz = prog.frame.carrier_rf_MHz;
        } else {
          result.diagnostics.push_back({Severity::error, "rf pulse needs a carrier (or a frame rf_carrier)", pp.span});
        }
        prog.elements.push_back(p);
      }
      if (symbolic && !result.spec)
        result.diagnostics.push_back(
            {Severity::warning, "symbolic carriers resolved against the default natural-sample register", seq.span});
      if (prog.elements.empty()) {
        result.diagnostics.push_back({Severity::error, "sequence '" + seq.name + "' has no elements", seq.span});
        continue;
      }
      if (!result.has_errors()) {
        try {
          prog.validate();
          std::vector<std::string> warnings;
          compile_segments(prog, resolve_spec, &warnings);
          for (auto& w : warnings) result.diagnostics.push_back({Severity::warning, w, seq.span});
        } catch (const std::exception& ex) {
          result.diagnostics.push_back({Severity::error, ex.what(), seq.span});
        }
      }
      result.programs.push_back(std::move(prog));
    }
  } catch (const std::exception& ex) {
    result.diagnostics.push_back({Severity::error, std::string("internal parser error: ") + ex.what(), {1, 1, 1}});
  }
  if (result.has_errors()) result.programs.clear();
  return result;
}

std::string to_canonical_text(const SequenceProgram& prog) {
  std::ostringstream os;
  os << "sequence " << (plain_ident(prog.name) ? prog.name : "\"" + prog.name + "\"") << " {\n";
  const char* manifold = prog.frame.subspace == Manifold::minus_one  ? "minus_one"
                         : prog.frame.subspace == Manifold::plus_one ? "plus_one"
                                                                     : "full";
  os << "  frame manifold = " << manifold
     << " carrier = " << quantity_text(prog.frame.carrier_mw_MHz, "MHz")
     << " rf_carrier = " << quantity_text(prog.frame.carrier_rf_MHz, "MHz") << "\n";
  for (const auto& el : prog.elements) {
    if (const auto* d = std::get_if<Delay>(&el)) {
      os << "  delay " << quantity_text(d->duration_us, "us") << "\n";
      continue;
    }
    const auto& p = std::get<Pulse>(el);
    os << "  " << (p.channel == DriveChannel::mw ? "mw" : "rf") << " pulse carrier = "
       << quantity_text(p.carrier_MHz, "MHz") << " rabi = " << (p.rabi_MHz ? quantity_text(*p.rabi_MHz, "MHz") : "ideal")
       << " flip = " << quantity_text(p.flip_deg, "deg") << " phase = " << quantity_text(p.phase_deg, "deg");
    if (p.target) os << " target = nmr(" << p.target->ms << ": " << p.target->mi_a << "," << p.target->mi_b << ")";
    os << "\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_canonical_text(const RegisterSpec& spec) {
  std::ostringstream os;
  os << "system {\n"
     << "  field = " << quantity_text(spec.field_mT, "mT") << "\n"
     << "  zfs = " << quantity_text(spec.zfs_MHz, "MHz") << "\n"
     << "  quadrupole = " << quantity_text(spec.quadrupole_MHz, "MHz") << "\n"
     << "  hyperfine = " << quantity_text(spec.hyperfine_MHz, "MHz") << "\n"
     << "  gamma_e = " << quantity_text(spec.gamma_e_MHz_per_mT, "MHz/mT") << "\n"
     << "  gamma_n14 = " << quantity_text(spec.gamma_n14_kHz_per_mT, "kHz/mT") << "\n";
  if (spec.carbon_present)
    os << "  carbon {\n"
       << "    azz = " << quantity_text(spec.azz_kHz, "kHz") << "\n"
       << "    azx = " << quantity_text(spec.azx_kHz, "kHz") << "\n"
       << "    gamma = " << quantity_text(spec.gamma_c13_kHz_per_mT, "kHz/mT") << "\n"
       << "  }\n";
  os << "  relaxation {\n"
     << "    t1_e = " << quantity_text(spec.t1_e_ms, "ms") << "\n"
     << "    t2s_e = " << quantity_text(spec.t2s_e_us, "us") << "\n"
     << "    t2s_n = " << quantity_text(spec.t2s_n_ms, "ms") << "\n"
     << "  }\n"
     << "}\n";
  return os.str();
}

}  // namespace nvsim::lang
