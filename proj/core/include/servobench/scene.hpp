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

/// @file
///
/// Deterministic pinhole renderer for colored point-splat scenes. The
/// simulator owns the scene; the servo loop only ever sees rendered images.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "servobench/pose.hpp"

namespace servobench {

struct CameraIntrinsics {
  double fx = 60.0;
  double fy = 60.0;
  double cx = 32.0;
  double cy = 24.0;
  int width = 64;
  int height = 48;

  /// Throws Error(kInvalidArgument) if any invariant is violated.
  void Validate() const;
};

using Rgb = std::array<std::uint8_t, 3>;

struct ScenePoint {
  Vec3 position;
  Rgb color;
};

struct PointScene {
  std::vector<ScenePoint> points;
  std::uint64_t seed = 0;
  double extent = 0.0;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  ///< row-major RGB

  Image() = default;
  Image(int w, int h, Rgb fill);

  Rgb at(int u, int v) const;
  friend bool operator==(const Image&, const Image&) = default;
};

struct PixelProjection {
  double u;
  double v;
  double depth;
};

inline constexpr double kNearPlane = 0.05;
inline constexpr Rgb kBackground = {16, 16, 16};
inline constexpr int kDefaultSplatRadius = 1;

/// Points uniform in the axis-aligned cube of side `extent` centered at the
/// origin; colors in [64, 255] per channel. Generator: Xorshift64Star(seed),
/// per point: three Uniform() draws for x, y, z then one Next() whose three
/// high bytes give r, g, b as 64 + byte % 192.
PointScene GenerateScene(std::uint64_t seed, int n_points, double extent);

/// Pinhole projection of a world point seen from world pose `camera_pose`
/// (O_T_c). Absent when depth <= kNearPlane.
std::optional<PixelProjection> Project(const Vec3& point,
                                       const PoseSE3& camera_pose,
                                       const CameraIntrinsics& k);

/// Z-buffered square splats of side 2*radius+1 on a kBackground canvas.
/// Pixel centers are u, v rounded half away from zero; the nearer point wins
/// a contested pixel, ties keep the earlier point.
Image Render(const PointScene& scene, const PoseSE3& camera_pose,
             const CameraIntrinsics& k, int splat_radius = kDefaultSplatRadius);

/// Binary PPM: "P6\n<w> <h>\n255\n" + raw RGB.
std::string EncodePpm(const Image& image);
Image DecodePpm(const std::string& bytes);
void WritePpm(const Image& image, const std::filesystem::path& path);
Image ReadPpm(const std::filesystem::path& path);

}  // namespace servobench
