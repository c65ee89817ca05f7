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

#include "servobench/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "servobench/error.hpp"
#include "servobench/rng.hpp"

namespace servobench {

namespace fs = std::filesystem;

namespace {

std::string ZeroPadded(int frame_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", frame_id);
  return buf;
}

Vec3 RandomUnitVector(Xorshift64Star& rng) {
  Vec3 v;
  do {
    v = Vec3(rng.Gaussian(), rng.Gaussian(), rng.Gaussian());
  } while (v.norm() < 1e-12);
  return v.normalized();
}

}  // namespace

std::string FrameImageName(int frame_id) {
  return "frame-" + ZeroPadded(frame_id) + ".color.ppm";
}

std::string FramePoseName(int frame_id) {
  return "frame-" + ZeroPadded(frame_id) + ".pose.txt";
}

PoseSE3 ParsePoseFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE ||
        !std::isfinite(value)) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ": bad number '" + token + "'");
    }
    values.push_back(value);
  }
  if (values.size() != 16) {
    throw Error(ErrorCode::kParseError,
                path.string() + ": expected 16 values, found " +
                    std::to_string(values.size()));
  }
  Mat4 m;
  for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = values[i];
  const Eigen::RowVector4d bottom(0.0, 0.0, 0.0, 1.0);
  if ((m.row(3) - bottom).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::kParseError,
                path.string() + ": bottom row is not (0, 0, 0, 1)");
  }
  const Mat3 r = m.topLeftCorner<3, 3>();
  const double ortho = OrthonormalityError(r);
  if (!(ortho < kRigidTolerance) || r.determinant() <= 0.0) {
    throw Error(ErrorCode::kNonRigidPose,
                path.string() + ": rotation block is not a rotation (error " +
                    std::to_string(ortho) + ")");
  }
  return {UnitQuaternion::FromRotationMatrix(Orthonormalize(r)),
          m.topRightCorner<3, 1>()};
}

Trajectory LoadTrajectory(const fs::path& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw Error(ErrorCode::kIoError,
                directory.string() + " is not a directory");
  }
  static const std::regex kPattern(R"(frame-(\d{6})\.pose\.txt)");
  std::map<int, fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    const std::string name = entry.path().filename().string();
    std::smatch match;
    if (entry.is_regular_file() && std::regex_match(name, match, kPattern)) {
      files.emplace(std::stoi(match[1].str()), entry.path());
    }
  }
  if (files.empty()) {
    throw Error(ErrorCode::kEmptyTrajectory,
                "no frame-NNNNNN.pose.txt files in " + directory.string());
  }
  Trajectory traj;
  int expected = files.begin()->first;
  for (const auto& [id, path] : files) {
    if (id != expected) {
      throw Error(ErrorCode::kMissingFrame,
                  "missing " + FramePoseName(expected) + " in " +
                      directory.string());
    }
    traj.frames.push_back({id, ParsePoseFile(path)});
    ++expected;
  }
  return traj;
}

void WriteTrajectory(const Trajectory& traj, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  for (const TrajectoryFrame& frame : traj.frames) {
    const fs::path path = directory / FramePoseName(frame.frame_id);
    std::ofstream out(path, std::ios::trunc);
    const Mat4 m = frame.pose.Matrix();
    char buf[64];
    for (int row = 0; row < 4; ++row) {
      for (int col = 0; col < 4; ++col) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(row, col));
        out << buf << (col == 3 ? '\n' : '\t');
      }
    }
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
}

PoseVector PairGroundTruth(const PoseSE3& pose_i, const PoseSE3& pose_j) {
  return PoseVector::FromPose(Relative(pose_i, pose_j));
}

std::vector<PairSample> SamplePairs(const Trajectory& traj, int window) {
  if (window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  }
  std::vector<PairSample> pairs;
  const int n = static_cast<int>(traj.frames.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - window);
    const int hi = std::min(n - 1, i + window);
    for (int j = lo; j <= hi; ++j) {
      if (j == i) continue;
      pairs.push_back({traj.frames[i].frame_id, traj.frames[j].frame_id,
                       PairGroundTruth(traj.frames[i].pose,
                                       traj.frames[j].pose)});
    }
  }
  return pairs;
}

Trajectory SyntheticTrajectory(const SyntheticTrajectoryConfig& cfg) {
  if (cfg.frames < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frames must be >= 1");
  }
  Xorshift64Star rng(cfg.seed);
  Trajectory traj;
  PoseSE3 pose = PoseSE3::Translation(0.0, 0.0, -cfg.distance);
  for (int id = 0; id < cfg.frames; ++id) {
    traj.frames.push_back({id, pose});
    const Vec3 step = (cfg.step_mm / 1000.0) * RandomUnitVector(rng);
    const Vec3 turn = (cfg.step_deg * kDegToRad) * RandomUnitVector(rng);
    pose = {pose.rotation * Exp(turn), pose.translation + step};
  }
  return traj;
}

ExportManifest ExportDataset(const Trajectory& traj, const PointScene& scene,
                             const CameraIntrinsics& k, int window,
                             const fs::path& out_dir, int splat_radius) {
  if (traj.frames.empty()) {
    throw Error(ErrorCode::kEmptyTrajectory, "trajectory has no frames");
  }
  k.Validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) {
    throw Error(ErrorCode::kIoError,
                "cannot create output directory " + out_dir.string());
  }
  const std::vector<PairSample> pairs = SamplePairs(traj, window);

  for (const TrajectoryFrame& frame : traj.frames) {
    WritePpm(Render(scene, frame.pose, k, splat_radius),
             out_dir / FrameImageName(frame.frame_id));
  }
  WriteTrajectory(traj, out_dir);

  ExportManifest manifest;
  manifest.manifest_path = out_dir / "manifest.jsonl";
  manifest.pair_count = pairs.size();
  manifest.image_count = traj.frames.size();
  std::ofstream out(manifest.manifest_path, std::ios::binary | std::ios::trunc);
  for (const PairSample& pair : pairs) {
    nlohmann::ordered_json record;
    record["cur"] = FrameImageName(pair.id_current);
    record["des"] = FrameImageName(pair.id_desired);
    const Vec3& x = pair.ground_truth.x;
    const UnitQuaternion& q = pair.ground_truth.q;
    record["x"] = {x.x(), x.y(), x.z()};
    record["q"] = {q.w(), q.x(), q.y(), q.z()};
    out << record.dump() << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::kIoError,
                "cannot write " + manifest.manifest_path.string());
  }
  return manifest;
}

}  // namespace servobench
