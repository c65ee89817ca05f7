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

#include <chrono>
#include <cmath>
#include <filesystem>

#include "servobench/error.hpp"
#include "servobench/estimator.hpp"
#include "servobench/servo.hpp"
#include "test_util.hpp"

namespace servobench {
namespace {

using testing::RandomPose;

std::string Stub(const std::string& mode) {
  return std::string(STUB_ESTIMATOR_PATH) + " " + mode;
}

ExternalEstimatorConfig StubConfig(const std::string& mode,
                                   double timeout_s = 5.0) {
  return {Stub(mode), timeout_s};
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

const Image kBlank(8, 6, kBackground);

TEST(OracleEstimate, NoiseFreeEqualsGroundTruth) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const PoseSE3 cur = RandomPose(rng), des = RandomPose(rng);
    const PoseVector est = OracleEstimate(cur, des, NoiseModel{}, i);
    const PoseSE3 rel = Relative(cur, des);
    EXPECT_EQ(est.x, rel.translation);
    EXPECT_EQ(est.q, rel.rotation);
    const PoseSE3 back = Compose(cur, est.ToPose());
    EXPECT_LT((back.translation - des.translation).norm(), 1e-9);
    EXPECT_LT(RotationAngle(back.rotation.Inverse() * des.rotation), 1e-9);
  }
}

TEST(OracleEstimate, NoiseVanishesAtGoal) {
  std::mt19937_64 rng(32);
  const PoseSE3 p = RandomPose(rng);
  const NoiseModel noise{0.3, 0.3, 9};
  for (int i = 0; i < 50; ++i) {
    const PoseVector est = OracleEstimate(p, p, noise, i);
    EXPECT_LT(est.x.norm(), 1e-12);
    EXPECT_LT(RotationAngle(est.q), 1e-9);
  }
}

TEST(OracleEstimate, NoiseFollowsDocumentedLaw) {
  const PoseSE3 cur = PoseSE3::Translation(0, 0, -3);
  const PoseSE3 des = Compose(cur, OffsetPose(kReferenceOffsetMm, kReferenceOffsetEulerDeg));
  const PoseVector truth = PoseVector::FromPose(Relative(cur, des));
  const double theta = RotationAngle(truth.q);
  const NoiseModel noise{0.05, 0.05, 1234};

  double sum_sq_t = 0.0, sum_sq_r = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const PoseVector est = OracleEstimate(cur, des, noise, i);
    sum_sq_t += (est.x - truth.x).squaredNorm();
    sum_sq_r += std::pow(RotationAngle(truth.q.Inverse() * est.q), 2);
  }
  const double std_t = std::sqrt(sum_sq_t / (3.0 * n));
  const double want_t = 0.05 * truth.x.norm();
  EXPECT_NEAR(std_t, want_t, 0.15 * want_t);
  const double std_r = std::sqrt(sum_sq_r / n);
  const double want_r = 0.05 * theta;
  EXPECT_NEAR(std_r, want_r, 0.15 * want_r);
}

TEST(OracleEstimate, ReproducibleGivenSeedAndCallIndex) {
  std::mt19937_64 rng(33);
  const PoseSE3 cur = RandomPose(rng), des = RandomPose(rng);
  const NoiseModel noise{0.05, 0.05, 77};
  OracleEstimator a(noise), b(noise);
  for (int i = 0; i < 20; ++i) {
    const PoseVector ea = a.Estimate(cur, des);
    const PoseVector eb = b.Estimate(cur, des);
    EXPECT_EQ(ea.x, eb.x);
    EXPECT_EQ(ea.q, eb.q);
    const PoseVector direct = OracleEstimate(cur, des, noise, i);
    EXPECT_EQ(ea.x, direct.x);
  }
  const PoseVector other = OracleEstimate(cur, des, NoiseModel{0.05, 0.05, 78}, 0);
  EXPECT_NE(other.x, OracleEstimate(cur, des, noise, 0).x);
}

TEST(NoiseModel, RejectsNegative) {
  EXPECT_THROW(OracleEstimator(NoiseModel{-0.1, 0, 0}), Error);
}

TEST(Protocol, RequestFormat) {
  EXPECT_EQ(FormatEstimateRequest("/tmp/a.ppm", "/tmp/b.ppm"),
            R"({"v":1,"cur":"/tmp/a.ppm","des":"/tmp/b.ppm"})");
}

TEST(Protocol, ParseResponse) {
  const PoseVector pv =
      ParseEstimateResponse(R"({"v":1,"x":[0.1,0.2,0.3],"q":[-2,0,0,0]})");
  EXPECT_EQ(pv.x, Vec3(0.1, 0.2, 0.3));
  EXPECT_EQ(pv.q, UnitQuaternion());
  for (const char* bad :
       {"", "nope", "[]", R"({"x":[0,0,0],"q":[1,0,0,0]})",
        R"({"v":2,"x":[0,0,0],"q":[1,0,0,0]})", R"({"v":1,"x":[0,0],"q":[1,0,0,0]})",
        R"({"v":1,"x":[0,0,0],"q":[1,0,0]})", R"({"v":1,"x":[null,0,0],"q":[1,0,0,0]})",
        R"({"v":1,"x":[0,0,0],"q":[0,0,0,0]})", R"({"v":1,"error":"busy"})"}) {
    EXPECT_EQ(CodeOf([&] { ParseEstimateResponse(bad); }),
              ErrorCode::kProtocolError)
        << bad;
  }
}

TEST(ExternalClient, IdentityStub) {
  ExternalClient client(StubConfig("identity"));
  EXPECT_TRUE(client.alive());
  EXPECT_TRUE(std::filesystem::is_directory(client.workspace()));
  for (int i = 0; i < 3; ++i) {
    const PoseVector pv = client.Estimate(kBlank, kBlank);
    EXPECT_EQ(pv.x, Vec3::Zero());
    EXPECT_EQ(pv.q, UnitQuaternion());
  }
}

TEST(ExternalClient, WorkspaceRemovedOnClose) {
  std::filesystem::path ws;
  {
    ExternalClient client(StubConfig("check"));
    ws = client.workspace();
    client.Estimate(kBlank, kBlank);
  }
  EXPECT_FALSE(std::filesystem::exists(ws));
}

TEST(ExternalClient, ImagesReachThePeer) {
  ExternalClient client(StubConfig("check"));
  EXPECT_EQ(client.Estimate(kBlank, kBlank).q, UnitQuaternion());
}

TEST(ExternalClient, CanonicalizesOnReceipt) {
  ExternalClient client(StubConfig("scaled"));
  const PoseVector pv = client.Estimate(kBlank, kBlank);
  EXPECT_EQ(pv.q, UnitQuaternion());
  EXPECT_EQ(pv.q.wxyz(), Vec4(1, 0, 0, 0));
  EXPECT_EQ(pv.x, Vec3(0.01, 0, 0));
}

TEST(ExternalClient, TimeoutWhenPeerNeverReplies) {
  ExternalClient client(StubConfig("silent", 0.3));
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(CodeOf([&] { client.Estimate(kBlank, kBlank); }), ErrorCode::kTimeout);
  const double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_GE(elapsed, 0.25);
  EXPECT_LT(elapsed, 3.0);
  EXPECT_FALSE(client.alive());
  EXPECT_EQ(CodeOf([&] { client.Estimate(kBlank, kBlank); }),
            ErrorCode::kProcessDead);
}

TEST(ExternalClient, TimeoutWithoutHandshake) {
  EXPECT_EQ(CodeOf([&] { ExternalClient client(StubConfig("mute", 0.3)); }),
            ErrorCode::kTimeout);
}

TEST(ExternalClient, MalformedResponse) {
  ExternalClient client(StubConfig("malformed"));
  EXPECT_EQ(CodeOf([&] { client.Estimate(kBlank, kBlank); }),
            ErrorCode::kProtocolError);
  // A protocol error leaves the session usable.
  EXPECT_TRUE(client.alive());
}

TEST(ExternalClient, PeerErrorAndZeroQuaternion) {
  ExternalClient err(StubConfig("error"));
  EXPECT_EQ(CodeOf([&] { err.Estimate(kBlank, kBlank); }),
            ErrorCode::kProtocolError);
  ExternalClient zero(StubConfig("zero-q"));
  EXPECT_EQ(CodeOf([&] { zero.Estimate(kBlank, kBlank); }),
            ErrorCode::kProtocolError);
}

TEST(ExternalClient, DeadProcess) {
  ExternalClient client(StubConfig("die"));
  EXPECT_EQ(CodeOf([&] { client.Estimate(kBlank, kBlank); }),
            ErrorCode::kProcessDead);
}

TEST(ExternalClient, MissingBinary) {
  EXPECT_EQ(CodeOf([&] {
              ExternalClient client({"/nonexistent/servobench-estimator", 5.0});
            }),
            ErrorCode::kProcessDead);
}

TEST(ExternalClient, RejectsBadConfig) {
  EXPECT_EQ(CodeOf([&] { ExternalClient client({"", 1.0}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { ExternalClient client({Stub("identity"), 0.0}); }),
            ErrorCode::kInvalidArgument);
}

TEST(ImageEstimator, RendersBothViews) {
  ImageEstimator est(std::make_unique<ExternalClient>(StubConfig("check")),
                     GenerateScene(1, 200, 2.0), CameraIntrinsics{});
  const PoseVector pv = est.Estimate(PoseSE3::Translation(0, 0, -3),
                                     PoseSE3::Translation(0.1, 0, -3));
  EXPECT_EQ(pv.q, UnitQuaternion());
}

}  // namespace
}  // namespace servobench
