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

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tmsq/noise_model.hpp"

namespace tmsq {

enum class SweepAxis { kProbeVisibilitySq, kConjugateVisibilitySq, kGain };
enum class Observable { kProbe, kConjugate, kSqueezed, kAntisqueezed };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Observable obs);
std::optional<SweepAxis> parse_axis(std::string_view text);
std::optional<Observable> parse_observable(std::string_view text);

double select(const NoiseQuartet& q, Observable obs);

struct SweepSpec {
  ModelParams base;
  SweepAxis axis = SweepAxis::kGain;
  double lo = 1.0;
  double hi = 10.0;
  std::size_t n_points = 2;
  std::vector<Observable> observables{Observable::kProbe, Observable::kConjugate,
                                      Observable::kSqueezed, Observable::kAntisqueezed};
};

struct SweepRow {
  double x = 0.0;       ///< Axis value (V^2 for visibility axes).
  NoiseQuartet noise;   ///< Linear variances.
};

struct SweepTable {
  SweepAxis axis = SweepAxis::kGain;
  std::vector<Observable> observables;
  std::vector<SweepRow> rows;

  std::vector<double> column(Observable obs) const;
};

/// Evaluates the closed-form model on a uniform grid over [lo, hi].
SweepTable sweep(const SweepSpec& spec);

struct Optimum {
  double x = 0.0;
  double value = 0.0;       ///< Linear variance at x.
  std::size_t grid_index = 0;
};

/// Grid argmin of `obs` refined by a three-point parabola through the
/// neighbours (skipped at the grid edges).
Optimum locate_minimum(const SweepTable& table, Observable obs);

struct VisibilityCurve {
  double visibility = 1.0;
  std::vector<double> squeezed;  ///< Linear, aligned with the gains list.
};

/// Squeezing vs gain for each visibility, applied to both detectors.
std::vector<VisibilityCurve> visibility_family(std::span<const double> gains, double eta_p,
                                               double eta_c, double eps_p, double eps_c,
                                               std::span<const double> visibilities);

}  // namespace tmsq
