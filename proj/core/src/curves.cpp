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

#include "tmsq/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace tmsq {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kProbeVisibilitySq: return "vp2";
    case SweepAxis::kConjugateVisibilitySq: return "vc2";
    case SweepAxis::kGain: return "gain";
  }
  return "?";
}

std::string_view to_string(Observable obs) {
  switch (obs) {
    case Observable::kProbe: return "probe";
    case Observable::kConjugate: return "conjugate";
    case Observable::kSqueezed: return "squeezed";
    case Observable::kAntisqueezed: return "antisqueezed";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view text) {
  for (auto a : {SweepAxis::kProbeVisibilitySq, SweepAxis::kConjugateVisibilitySq, SweepAxis::kGain}) {
    if (text == to_string(a)) return a;
  }
  return std::nullopt;
}

std::optional<Observable> parse_observable(std::string_view text) {
  for (auto o : {Observable::kProbe, Observable::kConjugate, Observable::kSqueezed,
                 Observable::kAntisqueezed}) {
    if (text == to_string(o)) return o;
  }
  return std::nullopt;
}

double select(const NoiseQuartet& q, Observable obs) {
  switch (obs) {
    case Observable::kProbe: return q.probe;
    case Observable::kConjugate: return q.conjugate;
    case Observable::kSqueezed: return q.squeezed;
    case Observable::kAntisqueezed: return q.antisqueezed;
  }
  return q.squeezed;
}

std::vector<double> SweepTable::column(Observable obs) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(select(r.noise, obs));
  return out;
}

SweepTable sweep(const SweepSpec& spec) {
  if (spec.n_points < 2) throw std::invalid_argument("sweep needs at least 2 points");
  if (!(spec.lo < spec.hi)) throw std::invalid_argument("sweep range must satisfy lo < hi");
  if (spec.observables.empty()) throw std::invalid_argument("no observables selected");
  if (spec.axis == SweepAxis::kGain) {
    if (!(spec.lo >= 1.0) || !std::isfinite(spec.hi)) {
      throw std::invalid_argument("gain axis must lie in [1, inf)");
    }
  } else if (!(spec.lo >= 0.0 && spec.hi <= 1.0)) {
    throw std::invalid_argument("visibility-squared axis must lie in [0, 1]");
  }

  SweepTable table;
  table.axis = spec.axis;
  table.observables = spec.observables;
  table.rows.reserve(spec.n_points);
  const double step = (spec.hi - spec.lo) / static_cast<double>(spec.n_points - 1);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    // Pin the last point to hi exactly.
    const double x = i + 1 == spec.n_points ? spec.hi : spec.lo + step * static_cast<double>(i);
    ModelParams p = spec.base;
    switch (spec.axis) {
      case SweepAxis::kGain: p.gain = x; break;
      case SweepAxis::kProbeVisibilitySq: p.v_p = std::sqrt(x); break;
      case SweepAxis::kConjugateVisibilitySq: p.v_c = std::sqrt(x); break;
    }
    table.rows.push_back({x, noise_quartet(p)});
  }
  return table;
}

Optimum locate_minimum(const SweepTable& table, Observable obs) {
  if (table.rows.empty()) throw std::invalid_argument("empty sweep table");
  const auto ys = table.column(obs);
  const auto it = std::min_element(ys.begin(), ys.end());
  const auto i = static_cast<std::size_t>(it - ys.begin());
  Optimum best{table.rows[i].x, ys[i], i};
  if (i == 0 || i + 1 == ys.size()) return best;

  const double x0 = table.rows[i - 1].x, x1 = table.rows[i].x, x2 = table.rows[i + 1].x;
  const double y0 = ys[i - 1], y1 = ys[i], y2 = ys[i + 1];
  const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
  const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / denom;
  if (!(a > 0.0)) return best;
  const double xv = -b / (2.0 * a);
  if (xv < x0 || xv > x2) return best;
  best.x = xv;
  best.value = std::min(y1, c - b * b / (4.0 * a));
  return best;
}

std::vector<VisibilityCurve> visibility_family(std::span<const double> gains, double eta_p,
                                               double eta_c, double eps_p, double eps_c,
                                               std::span<const double> visibilities) {
  if (visibilities.empty()) throw std::invalid_argument("visibility list is empty");
  if (gains.empty()) throw std::invalid_argument("gain list is empty");
  std::vector<VisibilityCurve> family;
  family.reserve(visibilities.size());
  for (double v : visibilities) {
    VisibilityCurve curve{v, {}};
    curve.squeezed.reserve(gains.size());
    for (double g : gains) {
      curve.squeezed.push_back(squeezed_noise({g, eta_p, eta_c, v, v, eps_p, eps_c}));
    }
    family.push_back(std::move(curve));
  }
  return family;
}

}  // namespace tmsq
