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

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tmsq/noise_model.hpp"

namespace tmsq::circuit {
namespace {

using testing::rel_err;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in) << path;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string circuit_file(const std::string& name) {
  return slurp(std::string(TMSQ_SOURCE_DIR) + "/circuits/" + name);
}

CircuitSpec parse_ok(std::string_view text) {
  const auto r = parse(text);
  EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.diagnostic().format());
  return r.ok() ? r.spec() : CircuitSpec{};
}

const ModelParams kFileParams{3.02, 0.73, 0.77, 0.986, 0.986, 0.9, 1.0};

TEST(Parse, GrammarExercise) {
  const auto spec = parse_ok(
      "mode p\nmode c\nsqueeze2 p c gain=3.0\nmeasure_joint p c phase_a=0 phase_b=0 sign=-");
  ASSERT_EQ(spec.modes.size(), 2u);
  EXPECT_EQ(spec.modes[1], (ModeLabel{"c", 1}));
  ASSERT_EQ(spec.elements.size(), 2u);
  EXPECT_EQ(std::get<Squeeze2>(spec.elements[0]), (Squeeze2{0, 1, 3.0}));
  EXPECT_EQ(std::get<MeasureJoint>(spec.elements[1]), (MeasureJoint{0, 1, 0.0, 0.0, -1}));
}

TEST(Parse, CommentsBlankLinesAndKeyOrder) {
  const auto spec = parse_ok(
      "# header\n\nmode a   # first\n\tmode b\nmix a eps=0.25 v=0.5 anc_var=2\n"
      "measure_joint a b sign=+ phase_b=1e-1 phase_a=-0.5\r\n");
  ASSERT_EQ(spec.elements.size(), 2u);
  EXPECT_EQ(std::get<Mix>(spec.elements[0]), (Mix{0, 0.5, 0.25, 2.0}));
  EXPECT_EQ(std::get<MeasureJoint>(spec.elements[1]), (MeasureJoint{0, 1, -0.5, 0.1, 1}));
}

TEST(Parse, UndeclaredModeReportsLine) {
  const auto r = parse("loss q t=0.5");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostic().kind, DiagnosticKind::kUndeclaredMode);
  EXPECT_EQ(r.diagnostic().line, 1u);
}

struct BadInput {
  std::string text;
  DiagnosticKind kind;
  std::size_t line;
};

class ParseErrors : public ::testing::TestWithParam<BadInput> {};

TEST_P(ParseErrors, Diagnose) {
  const auto& bad = GetParam();
  const auto r = parse(bad.text);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostic().kind, bad.kind) << r.diagnostic().format();
  EXPECT_EQ(r.diagnostic().line, bad.line) << r.diagnostic().format();
}

INSTANTIATE_TEST_SUITE_P(
    Corpus, ParseErrors,
    ::testing::Values(
        BadInput{"mode p\nfrobnicate p\nmeasure p phase=0", DiagnosticKind::kUnknownKeyword, 2},
        BadInput{"mode p\nmeasure q phase=0", DiagnosticKind::kUndeclaredMode, 2},
        BadInput{"mode p\nmode c\nsqueeze2 p c gain=0.9\nmeasure p phase=0", DiagnosticKind::kOutOfRange, 3},
        BadInput{"mode p\nloss p t=1.5\nmeasure p phase=0", DiagnosticKind::kOutOfRange, 2},
        BadInput{"mode p\nmix p v=0.9 eps=-0.1\nmeasure p phase=0", DiagnosticKind::kOutOfRange, 2},
        BadInput{"mode p\nmix p v=0.9 eps=0.1 anc_var=0.5\nmeasure p phase=0", DiagnosticKind::kOutOfRange, 2},
        BadInput{"mode p\nmode p\nmeasure p phase=0", DiagnosticKind::kDuplicateMode, 2},
        BadInput{"mode p\nloss p t=0,5\nmeasure p phase=0", DiagnosticKind::kSyntax, 2},
        BadInput{"mode p\nloss p\nmeasure p phase=0", DiagnosticKind::kSyntax, 2},
        BadInput{"mode p\nloss p t=0.5 t=0.4\nmeasure p phase=0", DiagnosticKind::kSyntax, 2},
        BadInput{"mode p\nloss p t=0.5 gain=2\nmeasure p phase=0", DiagnosticKind::kSyntax, 2},
        BadInput{"mode p\nmeasure p phase=nan", DiagnosticKind::kSyntax, 2},
        BadInput{"mode 9p\nmeasure p phase=0", DiagnosticKind::kSyntax, 1},
        BadInput{"mode p q\nmeasure p phase=0", DiagnosticKind::kSyntax, 1},
        BadInput{"mode p\nmode c\nmeasure_joint p c phase_a=0 phase_b=0 sign=*", DiagnosticKind::kSyntax, 3},
        BadInput{"mode p\nmode c\nsqueeze2 p p gain=2\nmeasure p phase=0", DiagnosticKind::kInvalidCircuit, 3},
        BadInput{"mode p\nmode c\nsqueeze2 p c gain=2\n", DiagnosticKind::kInvalidCircuit, 0}));

TEST(Parse, MalformedCorpusCoversEveryKind) {
  const std::string dir = TMSQ_TEST_DATA_DIR "/malformed/";
  const std::vector<std::pair<std::string, DiagnosticKind>> corpus{
      {"syntax.qnet", DiagnosticKind::kSyntax},
      {"unknown_keyword.qnet", DiagnosticKind::kUnknownKeyword},
      {"undeclared_mode.qnet", DiagnosticKind::kUndeclaredMode},
      {"out_of_range.qnet", DiagnosticKind::kOutOfRange},
      {"duplicate_mode.qnet", DiagnosticKind::kDuplicateMode},
      {"no_measurement.qnet", DiagnosticKind::kInvalidCircuit},
  };
  for (const auto& [file, kind] : corpus) {
    const auto r = parse(slurp(dir + file));
    ASSERT_FALSE(r.ok()) << file;
    EXPECT_EQ(r.diagnostic().kind, kind) << file << ": " << r.diagnostic().format();
  }
}

TEST(Render, RoundTripsGoldenFiles) {
  for (const char* name : {"fig5.qnet", "fig5_squeezed.qnet", "fig5_antisqueezed.qnet",
                           "probe_arm.qnet", "single_mode_coupling.qnet"}) {
    const auto spec = parse_ok(circuit_file(name));
    const auto text = render(spec);
    const auto again = parse_ok(text);
    EXPECT_EQ(again, spec) << name;
    EXPECT_EQ(render(again), text) << name;
  }
}

TEST(Render, RoundTripsRandomSpecs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    CircuitSpec spec;
    const std::size_t n = 2 + trial % 3;
    for (std::size_t i = 0; i < n; ++i) spec.modes.push_back({fmt::format("m_{}", i), i});
    std::uniform_int_distribution<std::size_t> mode(0, n - 1);
    for (int k = 0; k < 8; ++k) {
      const std::size_t a = mode(rng);
      const std::size_t b = (a + 1) % n;
      switch (kind(rng)) {
        case 0: spec.elements.emplace_back(Squeeze2{a, b, 1.0 + 1e3 * u(rng)}); break;
        case 1: spec.elements.emplace_back(Loss{a, u(rng)}); break;
        case 2:
          spec.elements.emplace_back(Mix{a, u(rng), u(rng),
                                         u(rng) < 0.5 ? std::nullopt : std::optional(1.0 + u(rng))});
          break;
        case 3: spec.elements.emplace_back(MeasureSingle{a, 1e-7 * (u(rng) - 0.5)}); break;
        default: spec.elements.emplace_back(MeasureJoint{a, b, u(rng), -u(rng), u(rng) < 0.5 ? 1 : -1}); break;
      }
    }
    spec.elements.emplace_back(MeasureSingle{0, 0.0});
    ASSERT_FALSE(validate(spec).has_value());
    EXPECT_EQ(parse_ok(render(spec)), spec);
  }
}

TEST(Evaluate, VacuumMeasurement) {
  const auto out = evaluate(parse_ok("mode p\nmeasure p phase=0"));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0].variance, 1.0);
  EXPECT_EQ(out[0].description, "p");
}

TEST(Evaluate, ReferenceCircuitMatchesClosedForms) {
  const auto out = evaluate(parse_ok(circuit_file("fig5.qnet")));
  ASSERT_EQ(out.size(), 4u);
  const auto q = noise_quartet(kFileParams);
  EXPECT_LE(rel_err(out[0].variance, q.probe), 1e-10);
  EXPECT_LE(rel_err(out[1].variance, q.conjugate), 1e-10);
  EXPECT_LE(rel_err(out[2].variance, q.squeezed), 1e-10);
  EXPECT_LE(rel_err(out[3].variance, q.antisqueezed), 1e-10);
  EXPECT_EQ(out[2].description, "p-c");
  EXPECT_EQ(out[3].description, "p+c");
}

TEST(Evaluate, GoldenVariants) {
  const auto sq = evaluate(parse_ok(circuit_file("fig5_squeezed.qnet")));
  EXPECT_LE(rel_err(sq.at(0).variance, squeezed_noise(kFileParams)), 1e-10);
  const auto asq = evaluate(parse_ok(circuit_file("fig5_antisqueezed.qnet")));
  EXPECT_LE(rel_err(asq.at(0).variance, antisqueezed_noise(kFileParams)), 1e-10);
  const auto probe = evaluate(parse_ok(circuit_file("probe_arm.qnet")));
  EXPECT_NEAR(probe.at(0).variance, 3.94100004432, 1e-10);
  const auto single = evaluate(parse_ok(circuit_file("single_mode_coupling.qnet")));
  EXPECT_LE(rel_err(single.at(0).variance, squeezed_noise({3.0, 0.74, 0.78, 0.986, 0.986, 0.0, 0.0})), 1e-10);
}

TEST(Evaluate, ElementOrder) {
  constexpr const char* kHead = "mode p\nmode c\nsqueeze2 p c gain=3\n";
  constexpr const char* kTail = "measure p phase=0\nmeasure_joint p c phase_a=0 phase_b=0 sign=-\n";
  const auto run = [&](const std::string& middle) {
    return evaluate(parse_ok(std::string(kHead) + middle + kTail));
  };
  // With the ancilla following the arm's own noise, loss and the mixer both
  // scale the excess noise and the correlations, so they commute.
  const auto lm = run("loss p t=0.7\nmix p v=0.9 eps=0.9\n");
  const auto ml = run("mix p v=0.9 eps=0.9\nloss p t=0.7\n");
  EXPECT_NEAR(lm[0].variance, probe_noise({3, 0.7, 1, 0.9, 1, 0.9, 0}), 1e-12);
  EXPECT_NEAR(lm[0].variance, ml[0].variance, 1e-12);
  EXPECT_NEAR(lm[1].variance, ml[1].variance, 1e-12);
  // A fixed ancilla does not scale with the loss, so there the order shows.
  const auto lm_fixed = run("loss p t=0.7\nmix p v=0.9 eps=1 anc_var=5\n");
  const auto ml_fixed = run("mix p v=0.9 eps=1 anc_var=5\nloss p t=0.7\n");
  EXPECT_GT(std::abs(lm_fixed[0].variance - ml_fixed[0].variance), 1e-2);
}

TEST(Evaluate, AncillaVarianceOverride) {
  // A vacuum-level ancilla reproduces eps = 0 whatever eps says.
  const auto forced = evaluate(parse_ok(
      "mode p\nmode c\nsqueeze2 p c gain=3\nmix p v=0.8 eps=1 anc_var=1\nmeasure p phase=0"));
  EXPECT_NEAR(forced[0].variance, probe_noise({3, 1, 1, 0.8, 1, 0.0, 0}), 1e-12);
}

TEST(Evaluate, RejectsInvalidSpec) {
  CircuitSpec spec;
  spec.modes.push_back({"p", 0});
  spec.elements.emplace_back(Loss{0, 0.5});
  EXPECT_THROW(evaluate(spec), std::invalid_argument);
  spec.elements.emplace_back(MeasureSingle{3, 0.0});
  EXPECT_EQ(validate(spec)->kind, DiagnosticKind::kUndeclaredMode);
}

TEST(Overrides, ParseAndApply) {
  auto spec = parse_ok(circuit_file("fig5.qnet"));
  const auto o1 = parse_override("squeeze2.gain=4");
  const auto o2 = parse_override("mix:p.eps=0.5");
  const auto o3 = parse_override("loss:c.t=0.8");
  ASSERT_TRUE(o1 && o2 && o3);
  EXPECT_EQ(o2->mode, "p");
  EXPECT_EQ(apply_overrides(spec, {*o1, *o2, *o3}), 3u);
  const auto out = evaluate(spec);
  EXPECT_LE(rel_err(out[2].variance, squeezed_noise({4.0, 0.73, 0.8, 0.986, 0.986, 0.5, 1.0})), 1e-10);

  EXPECT_FALSE(parse_override("gain=3"));
  EXPECT_FALSE(parse_override("squeeze2.gain"));
  EXPECT_FALSE(parse_override("squeeze2.gain=x"));
  EXPECT_FALSE(parse_override("mix:.eps=1"));
  EXPECT_THROW(apply_overrides(spec, {*parse_override("loss:q.t=0.5")}), std::invalid_argument);

  apply_overrides(spec, {*parse_override("loss:p.t=2")});
  EXPECT_EQ(validate(spec)->kind, DiagnosticKind::kOutOfRange);
}

}  // namespace
}  // namespace tmsq::circuit
