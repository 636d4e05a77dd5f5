// Copyright 2026 The tmsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tmsq/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <system_error>

#include <fmt/format.h>

namespace tmsq::circuit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || digit(c); });
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value,
                                         std::chars_format::general);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

struct ParseError {
  Diagnostic diag;
};

[[noreturn]] void fail(DiagnosticKind kind, std::size_t line, std::string message) {
  throw ParseError{{kind, line, std::move(message)}};
}

struct Statement {
  std::size_t line = 0;
  std::string_view keyword;
  std::vector<std::string_view> positional;
  std::map<std::string_view, std::string_view> keys;
};

Statement tokenize(std::string_view raw, std::size_t line) {
  const auto hash = raw.find('#');
  if (hash != std::string_view::npos) raw = raw.substr(0, hash);
  const auto tokens = split_ws(raw);
  Statement st;
  st.line = line;
  if (tokens.empty()) return st;
  st.keyword = tokens.front();
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto tok = tokens[i];
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) {
      if (!st.keys.empty()) {
        fail(DiagnosticKind::kSyntax, line,
             fmt::format("positional argument '{}' after key=value pairs", tok));
      }
      st.positional.push_back(tok);
      continue;
    }
    const auto key = tok.substr(0, eq);
    if (key.empty()) fail(DiagnosticKind::kSyntax, line, fmt::format("empty key in '{}'", tok));
    if (!st.keys.emplace(key, tok.substr(eq + 1)).second) {
      fail(DiagnosticKind::kSyntax, line, fmt::format("duplicate key '{}'", key));
    }
  }
  return st;
}

class Parser {
 public:
  CircuitSpec run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      const auto end = nl == std::string_view::npos ? text.size() : nl;
      ++line_no;
      statement(tokenize(text.substr(pos, end - pos), line_no));
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (spec_.measurement_count() == 0) {
      fail(DiagnosticKind::kInvalidCircuit, 0, "circuit has no measure element");
    }
    return std::move(spec_);
  }

 private:
  void statement(const Statement& st) {
    if (st.keyword.empty()) return;
    if (st.keyword == "mode") {
      expect_shape(st, 1, {}, {});
      declare(st.positional[0], st.line);
    } else if (st.keyword == "squeeze2") {
      expect_shape(st, 2, {"gain"}, {});
      Squeeze2 e{mode(st, 0), mode(st, 1), number(st, "gain")};
      distinct(e.a, e.b, st.line);
      if (!(e.gain >= 1.0)) range(st, "gain", e.gain, "must be >= 1");
      spec_.elements.emplace_back(e);
    } else if (st.keyword == "loss") {
      expect_shape(st, 1, {"t"}, {});
      Loss e{mode(st, 0), number(st, "t")};
      if (!in_unit(e.t)) range(st, "t", e.t, "must lie in [0, 1]");
      spec_.elements.emplace_back(e);
    } else if (st.keyword == "mix") {
      expect_shape(st, 1, {"v", "eps"}, {"anc_var"});
      Mix e{mode(st, 0), number(st, "v"), number(st, "eps"), std::nullopt};
      if (!in_unit(e.v)) range(st, "v", e.v, "must lie in [0, 1]");
      if (!in_unit(e.eps)) range(st, "eps", e.eps, "must lie in [0, 1]");
      if (st.keys.count("anc_var")) {
        const double anc = number(st, "anc_var");
        if (!(anc >= 1.0)) range(st, "anc_var", anc, "must be >= 1");
        e.ancilla_variance = anc;
      }
      spec_.elements.emplace_back(e);
    } else if (st.keyword == "measure") {
      expect_shape(st, 1, {"phase"}, {});
      spec_.elements.emplace_back(MeasureSingle{mode(st, 0), number(st, "phase")});
    } else if (st.keyword == "measure_joint") {
      expect_shape(st, 2, {"phase_a", "phase_b", "sign"}, {});
      MeasureJoint e{mode(st, 0), mode(st, 1), number(st, "phase_a"),
                     number(st, "phase_b"), sign(st)};
      distinct(e.a, e.b, st.line);
      spec_.elements.emplace_back(e);
    } else {
      fail(DiagnosticKind::kUnknownKeyword, st.line,
           fmt::format("unknown keyword '{}'", st.keyword));
    }
  }

  void expect_shape(const Statement& st, std::size_t n_positional,
                    std::initializer_list<std::string_view> required,
                    std::initializer_list<std::string_view> optional) {
    if (st.positional.size() != n_positional) {
      fail(DiagnosticKind::kSyntax, st.line,
           fmt::format("'{}' takes {} mode argument(s), got {}", st.keyword,
                       n_positional, st.positional.size()));
    }
    for (const auto key : required) {
      if (!st.keys.count(key)) {
        fail(DiagnosticKind::kSyntax, st.line,
             fmt::format("'{}' is missing '{}='", st.keyword, key));
      }
    }
    for (const auto& [key, value] : st.keys) {
      const bool known =
          std::find(required.begin(), required.end(), key) != required.end() ||
          std::find(optional.begin(), optional.end(), key) != optional.end();
      if (!known) {
        fail(DiagnosticKind::kSyntax, st.line,
             fmt::format("'{}' does not accept key '{}'", st.keyword, key));
      }
    }
  }

  void declare(std::string_view name, std::size_t line) {
    if (!is_identifier(name)) {
      fail(DiagnosticKind::kSyntax, line, fmt::format("invalid mode name '{}'", name));
    }
    if (index_.count(name)) {
      fail(DiagnosticKind::kDuplicateMode, line,
           fmt::format("mode '{}' already declared", name));
    }
    const std::size_t index = spec_.modes.size();
    spec_.modes.push_back({std::string(name), index});
    index_.emplace(spec_.modes.back().name, index);
  }

  std::size_t mode(const Statement& st, std::size_t i) const {
    const auto name = st.positional[i];
    const auto it = index_.find(name);
    if (it == index_.end()) {
      fail(DiagnosticKind::kUndeclaredMode, st.line,
           fmt::format("mode '{}' used before declaration", name));
    }
    return it->second;
  }

  static double number(const Statement& st, std::string_view key) {
    const auto text = st.keys.at(key);
    const auto value = parse_double(text);
    if (!value) {
      fail(DiagnosticKind::kSyntax, st.line,
           fmt::format("'{}={}' is not a decimal number", key, text));
    }
    return *value;
  }

  static int sign(const Statement& st) {
    const auto text = st.keys.at("sign");
    if (text == "+") return 1;
    if (text == "-") return -1;
    fail(DiagnosticKind::kSyntax, st.line,
         fmt::format("sign must be '+' or '-', got '{}'", text));
  }

  [[noreturn]] static void range(const Statement& st, std::string_view key, double value,
                                 std::string_view why) {
    fail(DiagnosticKind::kOutOfRange, st.line,
         fmt::format("{}={} {}", key, value, why));
  }

  static void distinct(std::size_t a, std::size_t b, std::size_t line) {
    if (a == b) {
      fail(DiagnosticKind::kInvalidCircuit, line,
           "two-mode element applied to a single mode");
    }
  }

  CircuitSpec spec_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

std::string mode_name(const CircuitSpec& spec, std::size_t index) {
  return index < spec.modes.size() ? spec.modes[index].name : fmt::format("#{}", index);
}

// Phase at which `mode` is next measured after element `from`; 0 if never.
double next_measured_phase(const CircuitSpec& spec, std::size_t from, std::size_t mode) {
  for (std::size_t i = from + 1; i < spec.elements.size(); ++i) {
    const auto* single = std::get_if<MeasureSingle>(&spec.elements[i]);
    if (single && single->mode == mode) return single->phase;
    const auto* joint = std::get_if<MeasureJoint>(&spec.elements[i]);
    if (joint && joint->a == mode) return joint->phase_a;
    if (joint && joint->b == mode) return joint->phase_b;
  }
  return 0.0;
}

}  // namespace

std::size_t CircuitSpec::measurement_count() const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(), [](const Element& e) {
    return std::holds_alternative<MeasureSingle>(e) || std::holds_alternative<MeasureJoint>(e);
  }));
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kSyntax: return "syntax";
    case DiagnosticKind::kUnknownKeyword: return "unknown-keyword";
    case DiagnosticKind::kUndeclaredMode: return "undeclared-mode";
    case DiagnosticKind::kOutOfRange: return "out-of-range";
    case DiagnosticKind::kDuplicateMode: return "duplicate-mode";
    case DiagnosticKind::kInvalidCircuit: return "invalid-circuit";
  }
  return "unknown";
}

std::string Diagnostic::format() const {
  if (line == 0) return fmt::format("error[{}]: {}", to_string(kind), message);
  return fmt::format("line {}: error[{}]: {}", line, to_string(kind), message);
}

ParseResult parse(std::string_view text) {
  try {
    return Parser{}.run(text);
  } catch (const ParseError& e) {
    return e.diag;
  }
}

std::string render(const CircuitSpec& spec) {
  std::string out;
  for (const auto& m : spec.modes) out += fmt::format("mode {}\n", m.name);
  const auto name = [&](std::size_t i) { return mode_name(spec, i); };
  for (const auto& element : spec.elements) {
    std::visit(Overloaded{
                   [&](const Squeeze2& e) {
                     out += fmt::format("squeeze2 {} {} gain={}\n", name(e.a), name(e.b), e.gain);
                   },
                   [&](const Loss& e) { out += fmt::format("loss {} t={}\n", name(e.mode), e.t); },
                   [&](const Mix& e) {
                     out += fmt::format("mix {} v={} eps={}", name(e.mode), e.v, e.eps);
                     if (e.ancilla_variance) out += fmt::format(" anc_var={}", *e.ancilla_variance);
                     out += '\n';
                   },
                   [&](const MeasureSingle& e) {
                     out += fmt::format("measure {} phase={}\n", name(e.mode), e.phase);
                   },
                   [&](const MeasureJoint& e) {
                     out += fmt::format("measure_joint {} {} phase_a={} phase_b={} sign={}\n",
                                        name(e.a), name(e.b), e.phase_a, e.phase_b,
                                        e.sign > 0 ? '+' : '-');
                   },
               },
               element);
  }
  return out;
}

std::optional<Diagnostic> validate(const CircuitSpec& spec) {
  auto problem = [](DiagnosticKind kind, std::string msg) {
    return std::optional<Diagnostic>(Diagnostic{kind, 0, std::move(msg)});
  };
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < spec.modes.size(); ++i) {
    const auto& m = spec.modes[i];
    if (!is_identifier(m.name)) return problem(DiagnosticKind::kSyntax, "invalid mode name '" + m.name + "'");
    if (m.index != i) return problem(DiagnosticKind::kInvalidCircuit, "mode indices must be sequential");
    if (!names.insert(m.name).second) {
      return problem(DiagnosticKind::kDuplicateMode, "mode '" + m.name + "' declared twice");
    }
  }
  const std::size_t n = spec.modes.size();
  for (std::size_t i = 0; i < spec.elements.size(); ++i) {
    const auto where = fmt::format("element {}", i + 1);
    const auto bad_mode = [&](std::size_t m) { return m >= n; };
    std::optional<Diagnostic> d = std::visit(
        Overloaded{
            [&](const Squeeze2& e) -> std::optional<Diagnostic> {
              if (bad_mode(e.a) || bad_mode(e.b)) return problem(DiagnosticKind::kUndeclaredMode, where);
              if (e.a == e.b) return problem(DiagnosticKind::kInvalidCircuit, where + ": identical modes");
              if (!(e.gain >= 1.0) || !std::isfinite(e.gain)) {
                return problem(DiagnosticKind::kOutOfRange, fmt::format("{}: gain={}", where, e.gain));
              }
              return std::nullopt;
            },
            [&](const Loss& e) -> std::optional<Diagnostic> {
              if (bad_mode(e.mode)) return problem(DiagnosticKind::kUndeclaredMode, where);
              if (!in_unit(e.t)) return problem(DiagnosticKind::kOutOfRange, fmt::format("{}: t={}", where, e.t));
              return std::nullopt;
            },
            [&](const Mix& e) -> std::optional<Diagnostic> {
              if (bad_mode(e.mode)) return problem(DiagnosticKind::kUndeclaredMode, where);
              if (!in_unit(e.v) || !in_unit(e.eps) ||
                  (e.ancilla_variance && !(*e.ancilla_variance >= 1.0))) {
                return problem(DiagnosticKind::kOutOfRange, where + ": mix parameter out of range");
              }
              return std::nullopt;
            },
            [&](const MeasureSingle& e) -> std::optional<Diagnostic> {
              if (bad_mode(e.mode)) return problem(DiagnosticKind::kUndeclaredMode, where);
              if (!std::isfinite(e.phase)) return problem(DiagnosticKind::kOutOfRange, where + ": phase");
              return std::nullopt;
            },
            [&](const MeasureJoint& e) -> std::optional<Diagnostic> {
              if (bad_mode(e.a) || bad_mode(e.b)) return problem(DiagnosticKind::kUndeclaredMode, where);
              if (e.a == e.b) return problem(DiagnosticKind::kInvalidCircuit, where + ": identical modes");
              if (e.sign != 1 && e.sign != -1) return problem(DiagnosticKind::kOutOfRange, where + ": sign");
              if (!std::isfinite(e.phase_a) || !std::isfinite(e.phase_b)) {
                return problem(DiagnosticKind::kOutOfRange, where + ": phase");
              }
              return std::nullopt;
            },
        },
        spec.elements[i]);
    if (d) return d;
  }
  if (spec.measurement_count() == 0) {
    return problem(DiagnosticKind::kInvalidCircuit, "circuit has no measure element");
  }
  return std::nullopt;
}

std::vector<Measurement> evaluate(const CircuitSpec& spec) {
  if (const auto d = validate(spec)) throw std::invalid_argument(d->format());

  std::vector<std::string> names;
  names.reserve(spec.modes.size());
  for (const auto& m : spec.modes) names.push_back(m.name);
  GaussianState state = vacuum(std::move(names));

  std::vector<Measurement> out;
  for (std::size_t i = 0; i < spec.elements.size(); ++i) {
    std::visit(Overloaded{
                   [&](const Squeeze2& e) { state = apply_two_mode_squeeze(state, e.a, e.b, e.gain); },
                   [&](const Loss& e) { state = apply_loss(state, e.mode, e.t); },
                   [&](const Mix& e) {
                     const double anc = e.ancilla_variance.value_or(quadrature_variance(
                         state, e.mode, next_measured_phase(spec, i, e.mode)));
                     // Squeezed single modes can sit below vacuum; the ancilla
                     // is never quieter than vacuum.
                     state = apply_visibility_mixer(state, e.mode, e.v, e.eps, std::max(anc, 1.0));
                   },
                   [&](const MeasureSingle& e) {
                     out.push_back({spec.modes[e.mode].name, quadrature_variance(state, e.mode, e.phase)});
                   },
                   [&](const MeasureJoint& e) {
                     out.push_back({fmt::format("{}{}{}", spec.modes[e.a].name, e.sign > 0 ? '+' : '-',
                                                spec.modes[e.b].name),
                                    joint_quadrature_variance(state, e.a, e.phase_a, e.b,
                                                              e.phase_b, e.sign)});
                   },
               },
               spec.elements[i]);
  }
  return out;
}

std::optional<Override> parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  const auto lhs = text.substr(0, eq);
  const auto value = parse_double(text.substr(eq + 1));
  if (!value) return std::nullopt;
  const auto dot = lhs.rfind('.');
  if (dot == std::string_view::npos || dot + 1 == lhs.size()) return std::nullopt;
  Override o;
  o.key = std::string(lhs.substr(dot + 1));
  auto target = lhs.substr(0, dot);
  const auto colon = target.find(':');
  if (colon != std::string_view::npos) {
    o.mode = std::string(target.substr(colon + 1));
    target = target.substr(0, colon);
    if (o.mode->empty()) return std::nullopt;
  }
  if (target.empty()) return std::nullopt;
  o.keyword = std::string(target);
  o.value = *value;
  return o;
}

std::size_t apply_overrides(CircuitSpec& spec, const std::vector<Override>& overrides) {
  std::size_t changed_total = 0;
  for (const auto& o : overrides) {
    std::size_t changed = 0;
    const auto matches = [&](std::size_t m) {
      return !o.mode || (m < spec.modes.size() && spec.modes[m].name == *o.mode);
    };
    for (auto& element : spec.elements) {
      std::visit(Overloaded{
                     [&](Squeeze2& e) {
                       if (o.keyword == "squeeze2" && o.key == "gain" && (matches(e.a) || matches(e.b))) {
                         e.gain = o.value;
                         ++changed;
                       }
                     },
                     [&](Loss& e) {
                       if (o.keyword == "loss" && o.key == "t" && matches(e.mode)) {
                         e.t = o.value;
                         ++changed;
                       }
                     },
                     [&](Mix& e) {
                       if (o.keyword != "mix" || !matches(e.mode)) return;
                       if (o.key == "v") e.v = o.value;
                       else if (o.key == "eps") e.eps = o.value;
                       else if (o.key == "anc_var") e.ancilla_variance = o.value;
                       else return;
                       ++changed;
                     },
                     [&](MeasureSingle& e) {
                       if (o.keyword == "measure" && o.key == "phase" && matches(e.mode)) {
                         e.phase = o.value;
                         ++changed;
                       }
                     },
                     [&](MeasureJoint& e) {
                       if (o.keyword != "measure_joint" || !(matches(e.a) || matches(e.b))) return;
                       if (o.key == "phase_a") e.phase_a = o.value;
                       else if (o.key == "phase_b") e.phase_b = o.value;
                       else if (o.key == "sign") e.sign = o.value > 0 ? 1 : -1;
                       else return;
                       ++changed;
                     },
                 },
                 element);
    }
    if (changed == 0) {
      throw std::invalid_argument(fmt::format("override '{}{}.{}' matched no element", o.keyword,
                                              o.mode ? ":" + *o.mode : std::string{}, o.key));
    }
    changed_total += changed;
  }
  return changed_total;
}

}  // namespace tmsq::circuit
