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

#include "tmsq/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace tmsq {
namespace {

void check_mode(const GaussianState& state, std::size_t mode) {
  if (mode >= state.n_modes()) {
    throw std::invalid_argument(fmt::format(
        "mode index {} out of range for {}-mode state", mode, state.n_modes()));
  }
}

void check_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("{} must lie in [0, 1], got {}", what, value));
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// Mixes `mode` with an uncorrelated, zero-mean, isotropic ancilla of
// variance `ancilla_variance` on a beam splitter of intensity transmittance t.
GaussianState mix_with_ancilla(const GaussianState& state, std::size_t mode,
                               double t, double ancilla_variance) {
  const double amp = std::sqrt(t);
  const Eigen::Index x = static_cast<Eigen::Index>(2 * mode);

  Eigen::MatrixXd cov = state.cov();
  cov.middleRows(x, 2) *= amp;
  cov.middleCols(x, 2) *= amp;
  cov.block(x, x, 2, 2) += (1.0 - t) * ancilla_variance * Eigen::Matrix2d::Identity();

  Eigen::VectorXd mean = state.mean();
  mean.segment(x, 2) *= amp;
  return GaussianState(std::move(mean), symmetrized(cov), state.names());
}

Eigen::Vector2d quadrature_direction(double phase) {
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                             std::vector<std::string> names)
    : mean_(std::move(mean)), cov_(std::move(cov)), names_(std::move(names)) {
  if (cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0 || cov_.rows() == 0) {
    throw std::invalid_argument("covariance must be a non-empty 2n x 2n matrix");
  }
  if (mean_.size() != cov_.rows()) {
    throw std::invalid_argument("mean length must match covariance dimension");
  }
  const std::size_t n = static_cast<std::size_t>(cov_.rows() / 2);
  if (names_.empty()) {
    names_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names_.push_back(fmt::format("m{}", i));
  }
  if (names_.size() != n) {
    throw std::invalid_argument("one name per mode required");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) {
      throw std::invalid_argument(fmt::format("duplicate mode name '{}'", name));
    }
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("covariance must be symmetric");
  }
}

std::size_t GaussianState::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw std::invalid_argument(fmt::format("no mode named '{}'", name));
}

ModeLabel GaussianState::label(std::size_t mode) const {
  check_mode(*this, mode);
  return {names_[mode], mode};
}

Eigen::Matrix2d GaussianState::mode_block(std::size_t mode) const {
  check_mode(*this, mode);
  const auto x = static_cast<Eigen::Index>(2 * mode);
  return cov_.block<2, 2>(x, x);
}

GaussianState vacuum(std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("vacuum needs at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return GaussianState(Eigen::VectorXd::Zero(dim),
                       Eigen::MatrixXd::Identity(dim, dim));
}

GaussianState vacuum(std::vector<std::string> names) {
  if (names.empty()) throw std::invalid_argument("vacuum needs at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * names.size());
  return GaussianState(Eigen::VectorXd::Zero(dim),
                       Eigen::MatrixXd::Identity(dim, dim), std::move(names));
}

GaussianState apply_two_mode_squeeze(const GaussianState& state,
                                     std::size_t mode_a, std::size_t mode_b,
                                     double gain) {
  check_mode(state, mode_a);
  check_mode(state, mode_b);
  if (mode_a == mode_b) {
    throw std::invalid_argument("two-mode squeezer needs two distinct modes");
  }
  if (!(gain >= 1.0) || !std::isfinite(gain)) {
    throw std::invalid_argument(fmt::format("gain must be >= 1, got {}", gain));
  }

  const double c = std::sqrt(gain);
  const double s = std::sqrt(gain - 1.0);
  const auto xa = static_cast<Eigen::Index>(2 * mode_a);
  const auto xb = static_cast<Eigen::Index>(2 * mode_b);

  // X_a' = c X_a + s X_b,  P_a' = c P_a - s P_b, and symmetrically for b.
  const auto dim = state.cov().rows();
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(dim, dim);
  S(xa, xa) = c;
  S(xa, xb) = s;
  S(xa + 1, xa + 1) = c;
  S(xa + 1, xb + 1) = -s;
  S(xb, xb) = c;
  S(xb, xa) = s;
  S(xb + 1, xb + 1) = c;
  S(xb + 1, xa + 1) = -s;

  Eigen::MatrixXd cov = S * state.cov() * S.transpose();
  Eigen::VectorXd mean = S * state.mean();
  return GaussianState(std::move(mean), symmetrized(cov), state.names());
}

GaussianState apply_loss(const GaussianState& state, std::size_t mode,
                         double t) {
  check_mode(state, mode);
  check_unit_interval(t, "transmittance");
  return mix_with_ancilla(state, mode, t, 1.0);
}

GaussianState apply_visibility_mixer(const GaussianState& state,
                                     std::size_t mode, double v, double eps,
                                     double ancilla_variance) {
  check_mode(state, mode);
  check_unit_interval(v, "visibility");
  check_unit_interval(eps, "thermal fraction");
  if (!(ancilla_variance >= 1.0) || !std::isfinite(ancilla_variance)) {
    throw std::invalid_argument(fmt::format(
        "ancilla variance must be >= 1, got {}", ancilla_variance));
  }
  const double effective = 1.0 + eps * (ancilla_variance - 1.0);
  return mix_with_ancilla(state, mode, v * v, effective);
}

double quadrature_variance(const GaussianState& state, std::size_t mode,
                           double phase) {
  const Eigen::Vector2d u = quadrature_direction(phase);
  return u.dot(state.mode_block(mode) * u);
}

double joint_quadrature_variance(const GaussianState& state,
                                 std::size_t mode_a, double phase_a,
                                 std::size_t mode_b, double phase_b, int sign) {
  check_mode(state, mode_a);
  check_mode(state, mode_b);
  if (mode_a == mode_b) {
    throw std::invalid_argument("joint quadrature needs two distinct modes");
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("sign must be +1 or -1");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(state.cov().rows());
  u.segment<2>(static_cast<Eigen::Index>(2 * mode_a)) = quadrature_direction(phase_a);
  u.segment<2>(static_cast<Eigen::Index>(2 * mode_b)) =
      static_cast<double>(sign) * quadrature_direction(phase_b);
  return 0.5 * u.dot(state.cov() * u);
}

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

double min_uncertainty_eigenvalue(const GaussianState& state) {
  const Eigen::MatrixXcd h =
      state.cov().cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) *
          symplectic_form(state.n_modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const GaussianState& state, double tol) {
  return min_uncertainty_eigenvalue(state) >= -tol;
}

}  // namespace tmsq
