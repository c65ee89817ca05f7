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

#include "servobench/scene.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "servobench/error.hpp"
#include "servobench/rng.hpp"

namespace servobench {

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.0 && fy > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  if (!(cx > 0.0 && cx < width && cy > 0.0 && cy < height)) {
    throw Error(ErrorCode::kInvalidArgument,
                "principal point must lie inside the image");
  }
}

Image::Image(int w, int h, Rgb fill) : width(w), height(h) {
  pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill[0];
    pixels[i + 1] = fill[1];
    pixels[i + 2] = fill[2];
  }
}

Rgb Image::at(int u, int v) const {
  const std::size_t i = (static_cast<std::size_t>(v) * width + u) * 3;
  return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

PointScene GenerateScene(std::uint64_t seed, int n_points, double extent) {
  if (n_points < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_points must be >= 1");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorCode::kInvalidArgument, "extent must be positive");
  }
  Xorshift64Star rng(seed);
  PointScene scene;
  scene.seed = seed;
  scene.extent = extent;
  scene.points.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    ScenePoint p;
    for (int axis = 0; axis < 3; ++axis) {
      p.position[axis] = (rng.Uniform() - 0.5) * extent;
    }
    const std::uint64_t bits = rng.Next();
    for (int c = 0; c < 3; ++c) {
      const auto byte = static_cast<unsigned>((bits >> (56 - 8 * c)) & 0xFF);
      p.color[c] = static_cast<std::uint8_t>(64 + byte % 192);
    }
    scene.points.push_back(p);
  }
  return scene;
}

std::optional<PixelProjection> Project(const Vec3& point,
                                       const PoseSE3& camera_pose,
                                       const CameraIntrinsics& k) {
  const Vec3 pc = Inverse(camera_pose) * point;
  if (!(pc.z() > kNearPlane)) return std::nullopt;
  return PixelProjection{k.fx * pc.x() / pc.z() + k.cx,
                         k.fy * pc.y() / pc.z() + k.cy, pc.z()};
}

Image Render(const PointScene& scene, const PoseSE3& camera_pose,
             const CameraIntrinsics& k, int splat_radius) {
  if (splat_radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "splat radius must be >= 0");
  }
  Image image(k.width, k.height, kBackground);
  std::vector<double> zbuf(static_cast<std::size_t>(k.width) * k.height,
                           std::numeric_limits<double>::infinity());
  const PoseSE3 world_to_camera = Inverse(camera_pose);
  for (const ScenePoint& p : scene.points) {
    const Vec3 pc = world_to_camera * p.position;
    if (!(pc.z() > kNearPlane)) continue;
    const double u = k.fx * pc.x() / pc.z() + k.cx;
    const double v = k.fy * pc.y() / pc.z() + k.cy;
    // Far off-screen points would overflow the integer conversion.
    if (std::abs(u) > 1e6 || std::abs(v) > 1e6) continue;
    const long cu = std::lround(u);
    const long cv = std::lround(v);
    for (long row = cv - splat_radius; row <= cv + splat_radius; ++row) {
      if (row < 0 || row >= k.height) continue;
      for (long col = cu - splat_radius; col <= cu + splat_radius; ++col) {
        if (col < 0 || col >= k.width) continue;
        const std::size_t idx = static_cast<std::size_t>(row) * k.width + col;
        if (pc.z() < zbuf[idx]) {
          zbuf[idx] = pc.z();
          image.pixels[idx * 3] = p.color[0];
          image.pixels[idx * 3 + 1] = p.color[1];
          image.pixels[idx * 3 + 2] = p.color[2];
        }
      }
    }
  }
  return image;
}

std::string EncodePpm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

Image DecodePpm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (!in || magic != "P6" || w <= 0 || h <= 0 || maxval != 255) {
    throw Error(ErrorCode::kParseError, "not a P6/255 PPM image");
  }
  in.get();  // single whitespace after maxval
  Image image;
  image.width = w;
  image.height = h;
  const auto offset = static_cast<std::size_t>(in.tellg());
  const std::size_t size = static_cast<std::size_t>(w) * h * 3;
  if (bytes.size() - offset != size) {
    throw Error(ErrorCode::kParseError, "PPM pixel data has wrong length");
  }
  image.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                      bytes.end());
  return image;
}

void WritePpm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  const std::string data = EncodePpm(image);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

Image ReadPpm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return DecodePpm(bytes);
}

}  // namespace servobench
