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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace tmsq {
namespace {

TEST(Vacuum, IsIdentityWithZeroMean) {
  const auto one = vacuum(1);
  EXPECT_TRUE(one.cov().isApprox(Eigen::Matrix2d::Identity()));
  const auto three = vacuum(3);
  EXPECT_EQ(three.n_modes(), 3u);
  EXPECT_TRUE(three.cov().isIdentity(0.0));
  EXPECT_TRUE(three.mean().isZero(0.0));
}

TEST(Vacuum, PhaseInsensitive) {
  const auto s = vacuum(2);
  EXPECT_DOUBLE_EQ(quadrature_variance(s, 0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(quadrature_variance(s, 1, 2.1), 1.0);
}

TEST(Vacuum, RejectsZeroModes) { EXPECT_THROW(vacuum(0), std::invalid_argument); }

TEST(GaussianState, NamesMustBeUnique) {
  EXPECT_THROW(vacuum(std::vector<std::string>{"p", "p"}), std::invalid_argument);
  const auto s = vacuum(std::vector<std::string>{"p", "c"});
  EXPECT_EQ(s.index_of("c"), 1u);
  EXPECT_EQ(s.label(0), (ModeLabel{"p", 0}));
  EXPECT_THROW(s.index_of("q"), std::invalid_argument);
}

TEST(GaussianState, RejectsAsymmetricCovariance) {
  Eigen::Matrix2d c = Eigen::Matrix2d::Identity();
  c(0, 1) = 0.5;
  EXPECT_THROW(GaussianState(Eigen::Vector2d::Zero(), c), std::invalid_argument);
}

TEST(TwoModeSqueeze, UnitGainIsIdentity) {
  const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 1.0);
  EXPECT_TRUE(s.cov().isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-15));
}

TEST(TwoModeSqueeze, SingleModeVarianceIsThermal) {
  const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 3.02);
  EXPECT_NEAR(quadrature_variance(s, 0, 0.0), 5.04, 1e-12);
  EXPECT_NEAR(quadrature_variance(s, 1, 1.1), 5.04, 1e-12);
}

TEST(TwoModeSqueeze, DifferenceQuadratureIsSqueezed) {
  const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 2.0);
  EXPECT_NEAR(joint_quadrature_variance(s, 0, 0.0, 1, 0.0, -1), 3.0 - 2.0 * std::sqrt(2.0), 1e-12);
  const auto g3 = apply_two_mode_squeeze(vacuum(2), 0, 1, 3.0);
  EXPECT_NEAR(joint_quadrature_variance(g3, 0, 0.0, 1, 0.0, -1), 5.0 - 2.0 * std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(joint_quadrature_variance(g3, 0, 0.0, 1, 0.0, +1), 5.0 + 2.0 * std::sqrt(6.0), 1e-12);
  // P quadratures are anti-correlated: the P-sum is the squeezed one.
  const double half_pi = std::numbers::pi / 2;
  EXPECT_NEAR(joint_quadrature_variance(g3, 0, half_pi, 1, half_pi, +1), 5.0 - 2.0 * std::sqrt(6.0), 1e-12);
}

TEST(TwoModeSqueeze, LeavesOtherModesAlone) {
  const auto s = apply_two_mode_squeeze(vacuum(3), 0, 2, 4.0);
  EXPECT_DOUBLE_EQ(quadrature_variance(s, 1, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.cov()(2, 0), 0.0);
}

TEST(TwoModeSqueeze, RejectsBadArguments) {
  EXPECT_THROW(apply_two_mode_squeeze(vacuum(2), 0, 1, 0.99), std::invalid_argument);
  EXPECT_THROW(apply_two_mode_squeeze(vacuum(2), 1, 1, 2.0), std::invalid_argument);
  EXPECT_THROW(apply_two_mode_squeeze(vacuum(2), 0, 2, 2.0), std::invalid_argument);
}

TEST(Loss, EndpointsAndThermalExample) {
  const auto sq = apply_two_mode_squeeze(vacuum(2), 0, 1, 3.02);
  EXPECT_TRUE(apply_loss(sq, 0, 1.0).cov().isApprox(sq.cov(), 1e-15));
  const auto gone = apply_loss(sq, 0, 0.0);
  EXPECT_TRUE(gone.mode_block(0).isApprox(Eigen::Matrix2d::Identity(), 1e-15));
  EXPECT_NEAR(gone.cov()(0, 2), 0.0, 1e-15);

  // 0.73 * 5.04 + 0.27
  EXPECT_NEAR(quadrature_variance(apply_loss(sq, 0, 0.73), 0, 0.0), 3.9492, 1e-12);
}

TEST(Loss, HalfTransmissionOnVarianceThree) {
  const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 2.0);
  EXPECT_NEAR(quadrature_variance(apply_loss(s, 0, 0.5), 0, 0.0), 2.0, 1e-12);
}

TEST(Loss, ScalesMeanAndCrossTerms) {
  Eigen::Vector4d mean(2.0, -1.0, 0.5, 0.0);
  GaussianState s(mean, Eigen::MatrixXd::Identity(4, 4));
  s = apply_two_mode_squeeze(s, 0, 1, 2.0);
  const auto lossy = apply_loss(s, 0, 0.64);
  EXPECT_NEAR(lossy.mean()(0), 0.8 * s.mean()(0), 1e-14);
  EXPECT_NEAR(lossy.mean()(2), s.mean()(2), 1e-14);
  EXPECT_NEAR(lossy.cov()(0, 2), 0.8 * s.cov()(0, 2), 1e-14);
}

TEST(Loss, RejectsOutOfRange) {
  EXPECT_THROW(apply_loss(vacuum(1), 0, -0.01), std::invalid_argument);
  EXPECT_THROW(apply_loss(vacuum(1), 0, 1.01), std::invalid_argument);
}

TEST(Loss, ComposesMultiplicatively) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 1.0 + 10.0 * u(rng));
    const double t1 = u(rng), t2 = u(rng);
    const auto twice = apply_loss(apply_loss(s, 0, t1), 0, t2);
    const auto once = apply_loss(s, 0, t1 * t2);
    EXPECT_LE((twice.cov() - once.cov()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(VisibilityMixer, UnitVisibilityIsIdentity) {
  const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 3.0);
  EXPECT_TRUE(apply_visibility_mixer(s, 0, 1.0, 0.5, 5.0).cov().isApprox(s.cov(), 1e-15));
}

TEST(VisibilityMixer, ZeroEpsilonIsLoss) {
  const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 3.0);
  const double v = 0.8;
  EXPECT_TRUE(apply_visibility_mixer(s, 0, v, 0.0, 5.0).cov().isApprox(apply_loss(s, 0, v * v).cov(), 1e-14));
}

TEST(VisibilityMixer, ThermalAncillaExample) {
  // S = 3.9492 after gain 3.02 and transmission 0.73; v = 0.986, eps = 0.9.
  auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 3.02);
  s = apply_loss(s, 0, 0.73);
  const double signal = quadrature_variance(s, 0, 0.0);
  const auto mixed = apply_visibility_mixer(s, 0, 0.986, 0.9, signal);
  // Evaluated independently (numpy, explicit ancilla mode): 3.94100004432.
  EXPECT_NEAR(quadrature_variance(mixed, 0, 0.0), 3.94100004432, 1e-10);
}

TEST(VisibilityMixer, RejectsOutOfRange) {
  const auto s = vacuum(1);
  EXPECT_THROW(apply_visibility_mixer(s, 0, 1.1, 0.5, 2.0), std::invalid_argument);
  EXPECT_THROW(apply_visibility_mixer(s, 0, 0.9, -0.1, 2.0), std::invalid_argument);
  EXPECT_THROW(apply_visibility_mixer(s, 0, 0.9, 0.5, 0.9), std::invalid_argument);
}

TEST(JointQuadrature, VacuumNormalization) {
  const auto s = vacuum(2);
  EXPECT_DOUBLE_EQ(joint_quadrature_variance(s, 0, 0.0, 1, 0.0, -1), 1.0);
  EXPECT_DOUBLE_EQ(joint_quadrature_variance(s, 0, 0.4, 1, 1.3, +1), 1.0);
  EXPECT_THROW(joint_quadrature_variance(s, 0, 0.0, 0, 0.0, -1), std::invalid_argument);
  EXPECT_THROW(joint_quadrature_variance(s, 0, 0.0, 1, 0.0, 2), std::invalid_argument);
}

TEST(JointQuadrature, RotationCovariance) {
  // Rotating both local oscillators by opposite angles keeps the squeezed
  // quadrature of this phase convention: X_a cos + P_a sin against
  // X_b cos - P_b sin.
  const auto s = apply_two_mode_squeeze(vacuum(2), 0, 1, 3.0);
  const double ref = joint_quadrature_variance(s, 0, 0.0, 1, 0.0, -1);
  for (double theta : {0.1, 0.7, 1.3, 2.9}) {
    EXPECT_NEAR(joint_quadrature_variance(s, 0, theta, 1, -theta, -1), ref, 1e-12);
  }
}

TEST(Physicality, RandomOperationSequencesStayPhysical) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> op(0, 2);
  std::uniform_int_distribution<std::size_t> mode(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    GaussianState s = vacuum(4);
    for (int step = 0; step < 12; ++step) {
      const std::size_t a = mode(rng);
      switch (op(rng)) {
        case 0: {
          std::size_t b = mode(rng);
          if (b == a) b = (a + 1) % 4;
          s = apply_two_mode_squeeze(s, a, b, 1.0 + 4.0 * u(rng));
          break;
        }
        case 1: s = apply_loss(s, a, u(rng)); break;
        default:
          s = apply_visibility_mixer(s, a, u(rng), u(rng), 1.0 + 5.0 * u(rng));
          break;
      }
      ASSERT_TRUE(is_physical(s, 1e-9 * s.cov().cwiseAbs().maxCoeff()))
          << "min eigenvalue " << min_uncertainty_eigenvalue(s);
      for (std::size_t m = 0; m < 4; ++m) {
        const auto block = s.mode_block(m);
        EXPECT_GE(block(0, 0), 1.0 - 1e-9);
        EXPECT_GE(block(0, 0) * block(1, 1), 1.0 - 1e-9);
      }
      EXPECT_LE((s.cov() - s.cov().transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(Physicality, DetectsUnphysicalCovariance) {
  // Var(X) Var(P) = 0.25 violates the uncertainty bound.
  Eigen::Matrix2d c;
  c << 0.5, 0.0, 0.0, 0.5;
  EXPECT_FALSE(is_physical(GaussianState(Eigen::Vector2d::Zero(), c)));
  EXPECT_TRUE(is_physical(vacuum(3)));
}

}  // namespace
}  // namespace tmsq
