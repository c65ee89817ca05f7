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

#include <filesystem>

#include "servobench/error.hpp"
#include "servobench/scene.hpp"

namespace servobench {
namespace {

CameraIntrinsics TestCamera() {
  CameraIntrinsics k;
  k.fx = 100;
  k.fy = 100;
  k.cx = 32;
  k.cy = 24;
  return k;
}

int CountNonBackground(const Image& img) {
  int n = 0;
  for (int v = 0; v < img.height; ++v)
    for (int u = 0; u < img.width; ++u) n += img.at(u, v) != kBackground;
  return n;
}

TEST(GenerateScene, Deterministic) {
  const PointScene a = GenerateScene(1, 100, 2.0);
  const PointScene b = GenerateScene(1, 100, 2.0);
  ASSERT_EQ(a.points.size(), 100u);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].position, b.points[i].position);
    EXPECT_EQ(a.points[i].color, b.points[i].color);
  }
}

TEST(GenerateScene, SeedsDiffer) {
  const PointScene a = GenerateScene(1, 100, 2.0);
  const PointScene b = GenerateScene(2, 100, 2.0);
  EXPECT_NE(a.points[0].position, b.points[0].position);
}

TEST(GenerateScene, CoordinatesInCube) {
  const PointScene s = GenerateScene(7, 1000, 2.0);
  for (const ScenePoint& p : s.points) {
    EXPECT_TRUE(std::isfinite(p.position.norm()));
    EXPECT_LE(p.position.cwiseAbs().maxCoeff(), 1.0);
    for (auto c : p.color) EXPECT_GE(c, 64);
  }
}

TEST(GenerateScene, RejectsZeroPoints) {
  try {
    GenerateScene(1, 0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Project, Examples) {
  const CameraIntrinsics k = TestCamera();
  const auto a = Project(Vec3(0, 0, 1), PoseSE3::Identity(), k);
  ASSERT_TRUE(a);
  EXPECT_DOUBLE_EQ(a->u, 32);
  EXPECT_DOUBLE_EQ(a->v, 24);
  EXPECT_DOUBLE_EQ(a->depth, 1.0);
  const auto b = Project(Vec3(0.1, 0, 1), PoseSE3::Identity(), k);
  ASSERT_TRUE(b);
  EXPECT_NEAR(b->u, 42, 1e-12);
  EXPECT_DOUBLE_EQ(b->v, 24);
  EXPECT_FALSE(Project(Vec3(0, 0, -1), PoseSE3::Identity(), k));
  EXPECT_FALSE(Project(Vec3(0, 0, 0.05), PoseSE3::Identity(), k));
}

TEST(Project, UsesCameraPose) {
  // Camera one meter behind the point along -z sees it on the optical axis.
  const auto p = Project(Vec3(0.5, 0.2, 3.0),
                         PoseSE3::Translation(0.5, 0.2, 2.0), TestCamera());
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->u, 32, 1e-12);
  EXPECT_NEAR(p->v, 24, 1e-12);
  EXPECT_NEAR(p->depth, 1.0, 1e-12);
}

TEST(Render, FacingAwayIsBackground) {
  const PointScene s = GenerateScene(3, 500, 2.0);
  // Camera at z = +3 looking along +z, away from the cube.
  const Image img = Render(s, PoseSE3::Translation(0, 0, 3), TestCamera(), 1);
  EXPECT_EQ(img, Image(64, 48, kBackground));
}

TEST(Render, SinglePointSplat) {
  PointScene s;
  s.points.push_back({Vec3(0, 0, 1), {200, 100, 50}});
  const Image img = Render(s, PoseSE3::Identity(), TestCamera(), 1);
  EXPECT_EQ(CountNonBackground(img), 9);
  for (int dv = -1; dv <= 1; ++dv)
    for (int du = -1; du <= 1; ++du)
      EXPECT_EQ(img.at(32 + du, 24 + dv), (Rgb{200, 100, 50}));
  EXPECT_EQ(CountNonBackground(Render(s, PoseSE3::Identity(), TestCamera(), 0)),
            1);
  EXPECT_EQ(CountNonBackground(Render(s, PoseSE3::Identity(), TestCamera(), 2)),
            25);
}

TEST(Render, NearerPointWins) {
  PointScene s;
  s.points.push_back({Vec3(0, 0, 2), {250, 0, 0}});
  s.points.push_back({Vec3(0, 0, 1), {0, 250, 0}});
  s.points.push_back({Vec3(0, 0, 3), {0, 0, 250}});
  const Image img = Render(s, PoseSE3::Identity(), TestCamera(), 1);
  EXPECT_EQ(img.at(32, 24), (Rgb{0, 250, 0}));
}

TEST(Render, RoundsHalfAwayFromZero) {
  PointScene s;
  // u = 100 * 0.005 / 1 + 32 = 32.5 -> 33
  s.points.push_back({Vec3(0.005, 0, 1), {200, 200, 200}});
  const Image img = Render(s, PoseSE3::Identity(), TestCamera(), 0);
  EXPECT_EQ(img.at(33, 24), (Rgb{200, 200, 200}));
  EXPECT_EQ(img.at(32, 24), kBackground);
}

TEST(Render, Deterministic) {
  const PointScene s = GenerateScene(11, 2000, 2.0);
  const PoseSE3 pose = PoseSE3::Translation(0.1, -0.05, -3);
  EXPECT_EQ(Render(s, pose, CameraIntrinsics{}), Render(s, pose, CameraIntrinsics{}));
}

TEST(Ppm, ExactHeaderAndRoundTrip) {
  Image img(3, 2, kBackground);
  img.pixels[0] = 255;
  const std::string bytes = EncodePpm(img);
  EXPECT_EQ(bytes.substr(0, 11), "P6\n3 2\n255\n");
  EXPECT_EQ(bytes.size(), 11u + 18u);
  EXPECT_EQ(DecodePpm(bytes), img);

  const auto path = std::filesystem::temp_directory_path() / "servobench_ppm_test.ppm";
  WritePpm(img, path);
  EXPECT_EQ(ReadPpm(path), img);
  std::filesystem::remove(path);
}

TEST(Ppm, RejectsTruncated) {
  EXPECT_THROW(DecodePpm("P6\n3 2\n255\nabc"), Error);
  EXPECT_THROW(DecodePpm("P5\n1 1\n255\nx"), Error);
}

TEST(CameraIntrinsics, Validation) {
  CameraIntrinsics k;
  EXPECT_NO_THROW(k.Validate());
  k.cx = 64;
  EXPECT_THROW(k.Validate(), Error);
  k = CameraIntrinsics{};
  k.fy = 0;
  EXPECT_THROW(k.Validate(), Error);
}

}  // namespace
}  // namespace servobench
