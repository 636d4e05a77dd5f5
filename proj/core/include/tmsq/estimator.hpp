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
#include <stdexcept>
#include <string>
#include <vector>

#include "tmsq/noise_model.hpp"

namespace tmsq {

/// One homodyne data point. Noises are in dB relative to shot noise; the
/// optional electronic floor is on the same scale and is subtracted in
/// linear units by linear_noises().
struct MeasurementPoint {
  std::string label;
  double probe_db = 0.0;
  double conjugate_db = 0.0;
  double squeezed_db = 0.0;
  double antisqueezed_db = 0.0;
  double v_p = 1.0;
  double v_c = 1.0;
  std::optional<double> electronic_floor_db;
};

/// Linear, floor-subtracted noises renormalized so shot noise is 1:
/// (x - f) / (1 - f). Throws std::invalid_argument when the floor reaches
/// the shot-noise level or any measured noise.
NoiseQuartet linear_noises(const MeasurementPoint& m);

/// A point whose noises are exactly the model prediction for `params`.
MeasurementPoint synthesize_point(const ModelParams& params, std::string label = {});

struct EstimateResult {
  std::string label;
  double gain = 0.0;
  double eta_p = 0.0;
  double eta_c = 0.0;
  bool feasible = false;
  std::string diagnostic;
  /// Measured minus predicted antisqueezing (dB), a consistency check that
  /// the three-equation inversion does not use.
  std::optional<double> antisqueezed_residual_db;
};

/// Recovers (G, eta_p, eta_c) from probe, conjugate and squeezed noise for
/// assumed thermal fractions. Never clamps; out-of-model points come back
/// infeasible with a reason.
EstimateResult invert_point(const MeasurementPoint& m, double eps_p, double eps_c);

/// Same, from linear shot-noise-normalized noises.
EstimateResult invert_noises(const NoiseQuartet& noises, double v_p, double v_c,
                             double eps_p, double eps_c);

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Statistic {
  double mean = 0.0;
  double std = 0.0;  ///< Sample (n - 1) standard deviation.
};

struct EstimateSummary {
  Statistic gain;
  Statistic eta_p;
  Statistic eta_c;
  std::size_t feasible_count = 0;
  std::size_t infeasible_count = 0;
};

/// Mean and sample std over feasible results; throws InsufficientData with
/// fewer than two.
EstimateSummary aggregate(std::span<const EstimateResult> results);

struct EpsilonScanRow {
  double eps_p = 0.0;
  EstimateSummary summary;
};

/// Re-inverts every point for each eps_p in the grid with eps_c held fixed.
std::vector<EpsilonScanRow> epsilon_scan(std::span<const MeasurementPoint> points,
                                         std::span<const double> eps_grid,
                                         double eps_c = 1.0);

}  // namespace tmsq
