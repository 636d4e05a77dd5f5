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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tmsq {

/// A named optical mode and its position inside a GaussianState.
struct ModeLabel {
  std::string name;
  std::size_t index = 0;

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// Gaussian state of N optical modes in shot-noise units.
///
/// Quadratures are ordered (X1, P1, X2, P2, ...) and normalized so that the
/// vacuum covariance is the identity. Every transformation below is a pure
/// function returning a new state; the covariance is re-symmetrized after
/// each step.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                std::vector<std::string> names = {});

  std::size_t n_modes() const { return names_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  const std::vector<std::string>& names() const { return names_; }

  /// Index of the mode called `name`; throws std::invalid_argument when
  /// absent.
  std::size_t index_of(std::string_view name) const;
  ModeLabel label(std::size_t mode) const;

  /// 2x2 covariance block of a single mode.
  Eigen::Matrix2d mode_block(std::size_t mode) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  std::vector<std::string> names_;
};

GaussianState vacuum(std::size_t n_modes);
GaussianState vacuum(std::vector<std::string> names);

/// Two-mode squeezer with intensity gain `gain`:
///   a -> sqrt(G) a + sqrt(G-1) b^dagger,  b -> sqrt(G) b + sqrt(G-1) a^dagger.
/// With this phase convention the X-difference quadrature is squeezed.
GaussianState apply_two_mode_squeeze(const GaussianState& state,
                                     std::size_t mode_a, std::size_t mode_b,
                                     double gain);

/// Beam splitter of intensity transmittance `t` with vacuum in the open port.
GaussianState apply_loss(const GaussianState& state, std::size_t mode,
                         double t);

/// Beam splitter of intensity transmittance v^2 whose open port carries an
/// uncorrelated thermal ancilla of variance 1 + eps * (ancilla_variance - 1).
GaussianState apply_visibility_mixer(const GaussianState& state,
                                     std::size_t mode, double v, double eps,
                                     double ancilla_variance);

/// Var(X cos(phase) + P sin(phase)) of one mode.
double quadrature_variance(const GaussianState& state, std::size_t mode,
                           double phase);

/// Var((Q_a + sign * Q_b) / sqrt(2)) where Q_i is the phase_i quadrature of
/// mode i. Two uncorrelated vacua give exactly 1.
double joint_quadrature_variance(const GaussianState& state,
                                 std::size_t mode_a, double phase_a,
                                 std::size_t mode_b, double phase_b, int sign);

/// Symplectic form Omega, block diagonal [[0, 1], [-1, 0]] per mode.
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// Smallest eigenvalue of the Hermitian matrix cov + i*Omega. A physical
/// state has this >= 0 (up to rounding).
double min_uncertainty_eigenvalue(const GaussianState& state);

bool is_physical(const GaussianState& state, double tol = 1e-9);

}  // namespace tmsq
