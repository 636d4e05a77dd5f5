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

#include <benchmark/benchmark.h>

#include "test_support.hpp"
#include "tmsq/circuit.hpp"
#include "tmsq/curves.hpp"
#include "tmsq/estimator.hpp"

namespace {

using namespace tmsq;

void BM_ClosedForms(benchmark::State& state) {
  const auto p = testing::operating_point();
  for (auto _ : state) benchmark::DoNotOptimize(noise_quartet(p));
}
BENCHMARK(BM_ClosedForms);

void BM_CovariancePipeline(benchmark::State& state) {
  const auto p = testing::operating_point();
  for (auto _ : state) benchmark::DoNotOptimize(testing::covariance_pipeline(p));
}
BENCHMARK(BM_CovariancePipeline);

void BM_InvertPoint(benchmark::State& state) {
  const auto m = synthesize_point(testing::operating_point());
  for (auto _ : state) benchmark::DoNotOptimize(invert_point(m, 0.9, 1.0));
}
BENCHMARK(BM_InvertPoint);

void BM_GainSweep(benchmark::State& state) {
  SweepSpec s;
  s.base = testing::operating_point();
  s.lo = 1.0;
  s.hi = 20.0;
  s.n_points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(locate_minimum(sweep(s), Observable::kSqueezed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GainSweep)->Arg(200)->Arg(20000);

void BM_ParseEvaluate(benchmark::State& state) {
  constexpr const char* kText =
      "mode p\nmode c\nsqueeze2 p c gain=3.02\nloss p t=0.73\nloss c t=0.77\n"
      "mix p v=0.986 eps=0.9\nmix c v=0.986 eps=1\nmeasure p phase=0\nmeasure c phase=0\n"
      "measure_joint p c phase_a=0 phase_b=0 sign=-\nmeasure_joint p c phase_a=0 phase_b=0 sign=+\n";
  for (auto _ : state) {
    auto parsed = circuit::parse(kText);
    benchmark::DoNotOptimize(circuit::evaluate(parsed.spec()));
  }
}
BENCHMARK(BM_ParseEvaluate);

}  // namespace

BENCHMARK_MAIN();
