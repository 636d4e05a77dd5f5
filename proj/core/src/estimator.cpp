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

#include "tmsq/estimator.hpp"

#include <cmath>

#include <fmt/format.h>

namespace tmsq {
namespace {

void check_fraction(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(fmt::format("{} must lie in [0, 1], got {}", what, x));
  }
}

EstimateResult infeasible(std::string why) {
  EstimateResult r;
  r.feasible = false;
  r.diagnostic = std::move(why);
  return r;
}

Statistic describe(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace

NoiseQuartet linear_noises(const MeasurementPoint& m) {
  NoiseQuartet q{from_db(m.probe_db), from_db(m.conjugate_db), from_db(m.squeezed_db),
                 from_db(m.antisqueezed_db)};
  if (!m.electronic_floor_db) return q;

  const double floor = from_db(*m.electronic_floor_db);
  if (floor >= 1.0) throw std::invalid_argument("electronic floor at or above shot noise");
  const auto correct = [&](double x, const char* what) {
    if (x <= floor) {
      throw std::invalid_argument(fmt::format("electronic floor at or above {} noise", what));
    }
    return (x - floor) / (1.0 - floor);
  };
  return {correct(q.probe, "probe"), correct(q.conjugate, "conjugate"),
          correct(q.squeezed, "squeezed"), correct(q.antisqueezed, "antisqueezed")};
}

MeasurementPoint synthesize_point(const ModelParams& params, std::string label) {
  const NoiseQuartet q = noise_quartet(params);
  return {std::move(label), to_db(q.probe),        to_db(q.conjugate), to_db(q.squeezed),
          to_db(q.antisqueezed), params.v_p, params.v_c, std::nullopt};
}

EstimateResult invert_noises(const NoiseQuartet& noises, double v_p, double v_c,
                             double eps_p, double eps_c) {
  check_fraction(v_p, "v_p");
  check_fraction(v_c, "v_c");
  check_fraction(eps_p, "eps_p");
  check_fraction(eps_c, "eps_c");

  if (!(noises.probe > 1.0) || !(noises.conjugate > 1.0)) {
    return infeasible("no excess noise");
  }
  const double w_p = visibility_weight(v_p, eps_p);
  const double w_c = visibility_weight(v_c, eps_c);
  if (!(v_p * v_c > 0.0)) {
    return infeasible("squeezing exceeds model bound for given visibilities");
  }

  // A = (G-1) eta_p and B = (G-1) eta_c follow from the single-arm noises.
  // The joint equation then fixes K = sqrt(G / (G-1)).
  const double a = (noises.probe - 1.0) / (2.0 * w_p);
  const double b = (noises.conjugate - 1.0) / (2.0 * w_c);
  const double k = (1.0 + a * w_p + b * w_c - noises.squeezed) / (2.0 * v_p * v_c * std::sqrt(a * b));
  if (!(k > 1.0) || !std::isfinite(k)) {
    return infeasible("squeezing exceeds model bound for given visibilities");
  }
  const double k2 = k * k;
  const double gain = k2 / (k2 - 1.0);
  const double g1 = 1.0 / (k2 - 1.0);  // G - 1, without cancellation

  EstimateResult r;
  r.gain = gain;
  r.eta_p = a / g1;
  r.eta_c = b / g1;
  if (r.eta_p > 1.0 || r.eta_c > 1.0) {
    r.feasible = false;
    r.diagnostic = "transmission above unity";
    return r;
  }
  r.feasible = true;
  const ModelParams fitted{gain, r.eta_p, r.eta_c, v_p, v_c, eps_p, eps_c};
  r.antisqueezed_residual_db = to_db(noises.antisqueezed) - to_db(antisqueezed_noise(fitted));
  return r;
}

EstimateResult invert_point(const MeasurementPoint& m, double eps_p, double eps_c) {
  EstimateResult r = invert_noises(linear_noises(m), m.v_p, m.v_c, eps_p, eps_c);
  r.label = m.label;
  return r;
}

EstimateSummary aggregate(std::span<const EstimateResult> results) {
  std::vector<double> g, ep, ec;
  EstimateSummary s;
  for (const auto& r : results) {
    if (!r.feasible) {
      ++s.infeasible_count;
      continue;
    }
    g.push_back(r.gain);
    ep.push_back(r.eta_p);
    ec.push_back(r.eta_c);
  }
  s.feasible_count = g.size();
  if (s.feasible_count < 2) {
    throw InsufficientData(fmt::format("need at least 2 feasible points, have {}", s.feasible_count));
  }
  s.gain = describe(g);
  s.eta_p = describe(ep);
  s.eta_c = describe(ec);
  return s;
}

std::vector<EpsilonScanRow> epsilon_scan(std::span<const MeasurementPoint> points,
                                         std::span<const double> eps_grid, double eps_c) {
  if (eps_grid.empty()) throw std::invalid_argument("epsilon grid is empty");
  for (double e : eps_grid) check_fraction(e, "eps_p");
  check_fraction(eps_c, "eps_c");
  if (points.size() < 2) {
    throw InsufficientData(fmt::format("need at least 2 points, have {}", points.size()));
  }

  std::vector<EpsilonScanRow> rows;
  rows.reserve(eps_grid.size());
  std::vector<EstimateResult> results(points.size());
  for (double eps_p : eps_grid) {
    for (std::size_t i = 0; i < points.size(); ++i) results[i] = invert_point(points[i], eps_p, eps_c);
    rows.push_back({eps_p, aggregate(results)});
  }
  return rows;
}

}  // namespace tmsq
