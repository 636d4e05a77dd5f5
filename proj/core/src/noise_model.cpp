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

#include "tmsq/noise_model.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace tmsq {
namespace {

void require(bool ok, const char* what, double value) {
  if (!ok) throw std::invalid_argument(fmt::format("{} out of range: {}", what, value));
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

// Single-arm noise, written in the same factored form as the published
// expression: (1 + 2(G-1)eta)(eps(1-V^2) + V^2) + (1-eps)(1-V^2).
double arm_noise(double gain, double eta, double v, double eps) {
  const double v2 = v * v;
  return (1.0 + 2.0 * (gain - 1.0) * eta) * (eps * (1.0 - v2) + v2) +
         (1.0 - eps) * (1.0 - v2);
}

double joint_common(const ModelParams& p) {
  const double g1 = p.gain - 1.0;
  const double vp2 = p.v_p * p.v_p;
  const double vc2 = p.v_c * p.v_c;
  return 1.0 + g1 * p.eta_p * (vp2 + p.eps_p * (1.0 - vp2)) +
         g1 * p.eta_c * (vc2 + p.eps_c * (1.0 - vc2));
}

double joint_cross(const ModelParams& p) {
  return 2.0 * std::sqrt(p.gain * (p.gain - 1.0)) * p.v_p * p.v_c *
         std::sqrt(p.eta_p * p.eta_c);
}

}  // namespace

void ModelParams::validate() const {
  require(gain >= 1.0 && std::isfinite(gain), "gain", gain);
  require(eta_p > 0.0 && eta_p <= 1.0, "eta_p", eta_p);
  require(eta_c > 0.0 && eta_c <= 1.0, "eta_c", eta_c);
  require(in_unit(v_p), "v_p", v_p);
  require(in_unit(v_c), "v_c", v_c);
  require(in_unit(eps_p), "eps_p", eps_p);
  require(in_unit(eps_c), "eps_c", eps_c);
}

ModelParams ModelParams::swapped_arms() const {
  return {gain, eta_c, eta_p, v_c, v_p, eps_c, eps_p};
}

double visibility(double max_power, double min_power) {
  if (!(min_power >= 0.0)) {
    throw std::invalid_argument("minimum power must be non-negative");
  }
  if (max_power < min_power) {
    throw std::invalid_argument("maximum power below minimum power");
  }
  if (!(max_power > 0.0)) {
    throw std::invalid_argument("visibility undefined for zero power");
  }
  return (max_power - min_power) / (max_power + min_power);
}

double gain_from_dc(double p_conj, double p_seed) {
  if (!(p_seed > 0.0)) throw std::invalid_argument("seed power must be positive");
  if (!(p_conj >= 0.0)) throw std::invalid_argument("conjugate power must be non-negative");
  return 1.0 + p_conj / p_seed;
}

double probe_noise(const ModelParams& p) {
  p.validate();
  return arm_noise(p.gain, p.eta_p, p.v_p, p.eps_p);
}

double conjugate_noise(const ModelParams& p) {
  p.validate();
  return arm_noise(p.gain, p.eta_c, p.v_c, p.eps_c);
}

double squeezed_noise(const ModelParams& p) {
  p.validate();
  return joint_common(p) - joint_cross(p);
}

double antisqueezed_noise(const ModelParams& p) {
  p.validate();
  return joint_common(p) + joint_cross(p);
}

NoiseQuartet noise_quartet(const ModelParams& p) {
  p.validate();
  return {arm_noise(p.gain, p.eta_p, p.v_p, p.eps_p),
          arm_noise(p.gain, p.eta_c, p.v_c, p.eps_c),
          joint_common(p) - joint_cross(p), joint_common(p) + joint_cross(p)};
}

double visibility_weight(double v, double eps) {
  const double v2 = v * v;
  return v2 + eps * (1.0 - v2);
}

double to_db(double linear) {
  if (!(linear > 0.0)) {
    throw std::invalid_argument(fmt::format("cannot take dB of {}", linear));
  }
  return 10.0 * std::log10(linear);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace tmsq
