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
/// Relative-pose training data: 7-Scenes style trajectory ingestion,
/// temporally close pair sampling and dataset export.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "servobench/pose.hpp"
#include "servobench/scene.hpp"

namespace servobench {

struct TrajectoryFrame {
  int frame_id = 0;
  PoseSE3 pose;  ///< O_T_c
};

struct Trajectory {
  std::vector<TrajectoryFrame> frames;
};

struct PairSample {
  int id_current = 0;
  int id_desired = 0;
  PoseVector ground_truth;  ///< c_T_c*: desired frame seen from current
};

/// Tolerance on ||R^T R - I||_inf above which a pose file is rejected.
inline constexpr double kRigidTolerance = 1e-3;

/// Parses one pose file: 16 whitespace-separated reals, row-major 4x4.
PoseSE3 ParsePoseFile(const std::filesystem::path& path);

/// Loads every frame-NNNNNN.pose.txt in `directory`, sorted by NNNNNN.
/// Frame numbers must be contiguous; a gap is a missing file.
Trajectory LoadTrajectory(const std::filesystem::path& directory);

/// Writes frame-NNNNNN.pose.txt files with round-trip precision.
void WriteTrajectory(const Trajectory& traj,
                     const std::filesystem::path& directory);

/// Relative pose of pose_j seen from pose_i.
PoseVector PairGroundTruth(const PoseSE3& pose_i, const PoseSE3& pose_j);

/// All ordered pairs (i, j), i != j, |i - j| <= window (frame indices, not
/// ids), ordered by i then j.
std::vector<PairSample> SamplePairs(const Trajectory& traj, int window);

/// Random-walk camera trajectory orbiting a scene at the origin. Frame ids
/// start at 0. Deterministic in `seed`.
struct SyntheticTrajectoryConfig {
  int frames = 50;
  std::uint64_t seed = 3;
  double distance = 3.0;  ///< initial distance from the origin along -z
  double step_mm = 20.0;  ///< translation per frame
  double step_deg = 2.0;  ///< rotation per frame
};
Trajectory SyntheticTrajectory(const SyntheticTrajectoryConfig& cfg);

struct ExportManifest {
  std::filesystem::path manifest_path;
  std::size_t pair_count = 0;
  std::size_t image_count = 0;
};

/// Renders each frame once to frame-NNNNNN.color.ppm, writes the pose files
/// and manifest.jsonl with one {"cur","des","x","q"} record per pair.
/// Paths inside the manifest are relative to `out_dir`.
ExportManifest ExportDataset(const Trajectory& traj, const PointScene& scene,
                             const CameraIntrinsics& k, int window,
                             const std::filesystem::path& out_dir,
                             int splat_radius = kDefaultSplatRadius);

/// Image file name used for a frame id.
std::string FrameImageName(int frame_id);
std::string FramePoseName(int frame_id);

}  // namespace servobench
