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

#pragma once

// `.qnet` circuit files: a line-oriented description of a Gaussian optical
// network applied left to right to vacuum.
//
//   # comment
//   mode <name>
//   squeeze2 <a> <b> gain=<float>
//   loss <m> t=<float>
//   mix <m> v=<float> eps=<float> [anc_var=<float>]
//   measure <m> phase=<float>
//   measure_joint <a> <b> phase_a=<float> phase_b=<float> sign=<+|->
//
// key=value pairs may appear in any order on their line.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tmsq/gaussian_state.hpp"

namespace tmsq::circuit {

struct Squeeze2 {
  std::size_t a = 0;
  std::size_t b = 0;
  double gain = 1.0;
  friend bool operator==(const Squeeze2&, const Squeeze2&) = default;
};

struct Loss {
  std::size_t mode = 0;
  double t = 1.0;
  friend bool operator==(const Loss&, const Loss&) = default;
};

struct Mix {
  std::size_t mode = 0;
  double v = 1.0;
  double eps = 0.0;
  /// When unset the ancilla copies the mode's variance at mix time.
  std::optional<double> ancilla_variance;
  friend bool operator==(const Mix&, const Mix&) = default;
};

struct MeasureSingle {
  std::size_t mode = 0;
  double phase = 0.0;
  friend bool operator==(const MeasureSingle&, const MeasureSingle&) = default;
};

struct MeasureJoint {
  std::size_t a = 0;
  std::size_t b = 0;
  double phase_a = 0.0;
  double phase_b = 0.0;
  int sign = -1;
  friend bool operator==(const MeasureJoint&, const MeasureJoint&) = default;
};

using Element = std::variant<Squeeze2, Loss, Mix, MeasureSingle, MeasureJoint>;

struct CircuitSpec {
  std::vector<ModeLabel> modes;
  std::vector<Element> elements;

  std::size_t measurement_count() const;
  friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

enum class DiagnosticKind {
  kSyntax,          // malformed statement: arity, missing/unknown key, bad number
  kUnknownKeyword,
  kUndeclaredMode,
  kOutOfRange,
  kDuplicateMode,
  kInvalidCircuit,  // no measurement, or a two-mode element on one mode
};

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::kSyntax;
  std::size_t line = 0;  // 1-based; 0 for whole-file problems
  std::string message;

  std::string format() const;
};

/// Either a spec or the first diagnostic encountered.
class ParseResult {
 public:
  ParseResult(CircuitSpec spec) : value_(std::move(spec)) {}
  ParseResult(Diagnostic diag) : value_(std::move(diag)) {}

  bool ok() const { return std::holds_alternative<CircuitSpec>(value_); }
  explicit operator bool() const { return ok(); }

  const CircuitSpec& spec() const { return std::get<CircuitSpec>(value_); }
  CircuitSpec& spec() { return std::get<CircuitSpec>(value_); }
  const Diagnostic& diagnostic() const { return std::get<Diagnostic>(value_); }

 private:
  std::variant<CircuitSpec, Diagnostic> value_;
};

ParseResult parse(std::string_view text);

/// Canonical text form. Floats are printed with round-trip precision, so
/// parse(render(spec)) == spec.
std::string render(const CircuitSpec& spec);

/// Checks the structural invariants of a spec built in code (or modified
/// after parsing). Returns the first violation, if any.
std::optional<Diagnostic> validate(const CircuitSpec& spec);

struct Measurement {
  std::string description;  // e.g. "p" or "p-c"
  double variance = 1.0;
};

/// Applies the elements in order to vacuum and returns one variance per
/// measure element. Throws std::invalid_argument for an invalid spec.
std::vector<Measurement> evaluate(const CircuitSpec& spec);

/// Parameter override of the form `<keyword>[:<mode>].<key>=<value>`, e.g.
/// `squeeze2.gain=3.5` or `mix:p.eps=0.9`. Applies to every matching element.
struct Override {
  std::string keyword;
  std::optional<std::string> mode;
  std::string key;
  double value = 0.0;
};

std::optional<Override> parse_override(std::string_view text);

/// Applies overrides in order; returns how many element fields changed.
/// Throws std::invalid_argument when an override matches nothing.
std::size_t apply_overrides(CircuitSpec& spec, const std::vector<Override>& overrides);

}  // namespace tmsq::circuit
