// Copyright 2026 The servobench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>

#include "servobench/controller.hpp"
#include "servobench/error.hpp"
#include "test_util.hpp"

namespace servobench {
namespace {

using testing::RandomPose;
using testing::ToOracle;

ControlConfig Six(double lambda = 1.0) { return {lambda, DofMode::kSix, {}, {}}; }

TEST(PbvsTwist, ZeroAtGoal) {
  const Twist t = PbvsTwist(PoseVector{}, Six());
  EXPECT_EQ(t.v.norm(), 0.0);
  EXPECT_EQ(t.w.norm(), 0.0);
}

TEST(PbvsTwist, PureTranslationMovesTowardGoal) {
  const Twist t = PbvsTwist({Vec3(0.1, 0, 0), {}}, Six());
  EXPECT_NEAR((t.v - Vec3(0.1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_EQ(t.w.norm(), 0.0);
}

TEST(PbvsTwist, PureRotation) {
  const Twist t = PbvsTwist(
      {Vec3::Zero(), UnitQuaternion::RotZ(std::numbers::pi / 2)}, Six());
  EXPECT_NEAR(t.v.norm(), 0.0, 1e-15);
  EXPECT_NEAR((t.w - Vec3(0, 0, std::numbers::pi / 2)).norm(), 0.0, 1e-12);
}

TEST(PbvsTwist, TranslationIdentity) {
  // (c*_R_c)^T c*_t_c = -c_t_c*, so v = lambda * c_t_c*.
  std::mt19937_64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    const PoseVector rel = PoseVector::FromPose(RandomPose(rng));
    const PoseSE3 inv = Inverse(rel.ToPose());
    const Vec3 lhs = inv.rotation.ToRotationMatrix().transpose() * inv.translation;
    EXPECT_LT((lhs + rel.x).norm(), 1e-12);
    const Twist t = PbvsTwist(rel, Six(0.7));
    EXPECT_LT((t.v - 0.7 * rel.x).norm(), 1e-12);
  }
}

TEST(PbvsTwist, MatchesMatrixOracle) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> gain(0.1, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const PoseVector rel = PoseVector::FromPose(RandomPose(rng));
    const double lambda = gain(rng);
    const Twist t = PbvsTwist(rel, Six(lambda));

    const oracle::Mat4 inv = oracle::Invert(ToOracle(rel.ToPose()));  // c*_T_c
    const oracle::Vec3 tt = oracle::Translation(inv);
    const oracle::Vec3 rv = oracle::RotationVector(inv);
    for (int r = 0; r < 3; ++r) {
      double rt_t = 0.0;
      for (int c = 0; c < 3; ++c) rt_t += inv[c][r] * tt[c];
      EXPECT_NEAR(t.v[r], -lambda * rt_t, 1e-9);
      EXPECT_NEAR(t.w[r], -lambda * rv[r], 1e-9);
    }
  }
}

TEST(PbvsTwist, NormInvariantsAndLinearity) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 1000; ++i) {
    const PoseVector rel = PoseVector::FromPose(RandomPose(rng));
    const Twist t1 = PbvsTwist(rel, Six(1.3));
    const Twist t2 = PbvsTwist(rel, Six(2.6));
    EXPECT_EQ(t2.v, 2.0 * t1.v);
    EXPECT_EQ(t2.w, 2.0 * t1.w);
    EXPECT_NEAR(t1.v.norm(), 1.3 * rel.x.norm(), 1e-12);
    EXPECT_NEAR(t1.w.norm(), 1.3 * RotationAngle(rel.q), 1e-12);
  }
}

TEST(Project4Dof, Examples) {
  const Twist zero = Project4Dof(Twist{});
  EXPECT_EQ(zero.v, Vec3::Zero());
  EXPECT_EQ(zero.w, Vec3::Zero());
  const Twist p = Project4Dof({Vec3(1, 2, 3), Vec3(0.1, 0.2, 0.3)});
  EXPECT_EQ(p.v, Vec3(1, 2, 3));
  EXPECT_EQ(p.w, Vec3(0, 0, 0.3));
  const Twist pure = Project4Dof({Vec3(0.4, -0.1, 0.2), Vec3::Zero()});
  EXPECT_EQ(pure.v, Vec3(0.4, -0.1, 0.2));
  EXPECT_EQ(pure.w, Vec3::Zero());
}

TEST(Project4Dof, Idempotent) {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const Twist t{Vec3(n(rng), n(rng), n(rng)), Vec3(n(rng), n(rng), n(rng))};
    const Twist once = Project4Dof(t);
    const Twist twice = Project4Dof(once);
    EXPECT_EQ(once.v, twice.v);
    EXPECT_EQ(once.w, twice.w);
  }
}

TEST(Command, FourDofAndSaturation) {
  const PoseVector rel{Vec3(1.0, 0, 0), UnitQuaternion::RotX(0.5)};
  ControlConfig cfg = Six();
  cfg.dof_mode = DofMode::kFour;
  EXPECT_EQ(Command(rel, cfg).w, Vec3::Zero());

  cfg = Six();
  cfg.max_linear_speed = 0.25;
  cfg.max_angular_speed = 0.1;
  const Twist t = Command(rel, cfg);
  EXPECT_NEAR(t.v.norm(), 0.25, 1e-15);
  EXPECT_NEAR(t.w.norm(), 0.1, 1e-15);
  EXPECT_NEAR(t.v.normalized().dot(Vec3::UnitX()), 1.0, 1e-15);

  // Unclamped by default.
  EXPECT_NEAR(Command(rel, Six()).v.norm(), 1.0, 1e-12);
}

TEST(ControlConfig, Validation) {
  EXPECT_THROW(Six(0.0).Validate(), Error);
  EXPECT_THROW(Six(-1.0).Validate(), Error);
  ControlConfig c = Six();
  c.max_linear_speed = 0.0;
  EXPECT_THROW(c.Validate(), Error);
}

}  // namespace
}  // namespace servobench
