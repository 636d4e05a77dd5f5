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

// Closed-form homodyne noise model for two-mode squeezed light measured with
// imperfect detector visibility. All variances are linear and normalized to
// shot noise (vacuum = 1); dB conversion happens only at the edges.

namespace tmsq {

/// Source and detection parameters of the gain -> loss -> visibility model.
struct ModelParams {
  double gain = 1.0;   ///< 4WM intensity gain G >= 1.
  double eta_p = 1.0;  ///< Probe intensity transmittance, (0, 1].
  double eta_c = 1.0;  ///< Conjugate intensity transmittance, (0, 1].
  double v_p = 1.0;    ///< Probe homodyne visibility, [0, 1].
  double v_c = 1.0;    ///< Conjugate homodyne visibility, [0, 1].
  double eps_p = 0.0;  ///< Thermal fraction of the probe mismatch port.
  double eps_c = 0.0;  ///< Thermal fraction of the conjugate mismatch port.

  /// Throws std::invalid_argument when any field is out of its range.
  void validate() const;

  /// The same parameters with the probe and conjugate arms exchanged.
  ModelParams swapped_arms() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// The four homodyne observables.
struct NoiseQuartet {
  double probe = 1.0;
  double conjugate = 1.0;
  double squeezed = 1.0;
  double antisqueezed = 1.0;
};

/// Interference visibility (max - min) / (max + min).
double visibility(double max_power, double min_power);

/// Gain from DC powers, using P_conj = (G - 1) * P_seed.
double gain_from_dc(double p_conj, double p_seed);

double probe_noise(const ModelParams& p);
double conjugate_noise(const ModelParams& p);
double squeezed_noise(const ModelParams& p);
double antisqueezed_noise(const ModelParams& p);
NoiseQuartet noise_quartet(const ModelParams& p);

/// Weight V^2 + eps (1 - V^2) with which excess noise survives the
/// visibility beam splitter.
double visibility_weight(double v, double eps);

double to_db(double linear);
double from_db(double db);

}  // namespace tmsq
