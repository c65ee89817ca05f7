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
/// Closed-loop servoing simulation: estimate, command, integrate, log and
/// test convergence; plus batch benchmarks over named presets.

#pragma once

#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "servobench/controller.hpp"
#include "servobench/estimator.hpp"
#include "servobench/pose.hpp"
#include "servobench/scene.hpp"

namespace servobench {

enum class EstimatorKind { kOracle, kExternal };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::kOracle;
  NoiseModel noise;                  ///< kOracle
  ExternalEstimatorConfig external;  ///< kExternal
};

/// Scene rendered for image-based estimators.
struct SceneSpec {
  std::uint64_t seed = 1;
  int n_points = 2000;
  double extent = 2.0;
  int splat_radius = kDefaultSplatRadius;
};

struct ServoConfig {
  PoseSE3 initial_pose;  ///< O_T_c at iteration 0
  PoseSE3 desired_pose;  ///< O_T_c*
  ControlConfig control;
  EstimatorSpec estimator;
  double dt = 0.05;
  int max_iters = 500;
  double tol_t_mm = 1.0;
  double tol_r_deg = 0.05;
  SceneSpec scene;
  CameraIntrinsics intrinsics;

  /// Also enforces lambda * dt < 1.
  void Validate() const;
};

struct ServoRecord {
  int iter = 0;
  PoseSE3 pose;  ///< true camera pose before the step
  Twist twist;   ///< command computed from this pose's estimate
  double t_err_mm = 0.0;
  double r_err_deg = 0.0;
};

struct ServoRun {
  std::vector<ServoRecord> records;
  bool converged = false;
  int iters_used = 0;  ///< == records.size()
  double tol_t_mm = 0.0;
  double tol_r_deg = 0.0;

  const ServoRecord& final_record() const { return records.back(); }
};

/// Body-frame Euler step: p' = p + R v dt, R' = R Exp(w dt).
PoseSE3 IntegrateStep(const PoseSE3& pose, const Twist& t, double dt);

/// Builds the estimator described by cfg.estimator.
std::unique_ptr<PoseEstimator> MakeEstimator(const ServoConfig& cfg);

/// Runs the loop until both tolerances hold or max_iters records exist.
/// Errors from the estimator are rethrown as EstimatorFailure.
ServoRun Run(const ServoConfig& cfg);
ServoRun Run(const ServoConfig& cfg, PoseEstimator& estimator);

/// Largest angle (degrees) between c*_t_c at any iteration with
/// t_err > tol and its initial direction. Throws kDegenerateTrajectory
/// unless the run starts outside tolerance and has two such iterations.
double Straightness(const ServoRun& run, const PoseSE3& desired);

/// Angle (degrees) between the optical (z) axes of the current and desired
/// frames: the roll/pitch part of the error, unaffected by yaw.
double TiltErrorDeg(const PoseSE3& current, const PoseSE3& desired);

/// Pose of the desired frame relative to the initial one from a
/// translation in millimeters and intrinsic XYZ Euler angles in degrees.
PoseSE3 OffsetPose(const Vec3& translation_mm, const Vec3& euler_xyz_deg);

/// Reference positioning task: offset (91.4, 92.3, 36.7) mm and intrinsic
/// XYZ Euler (8, 10, -5) deg from the initial camera pose.
inline const Vec3 kReferenceOffsetMm{91.4, 92.3, 36.7};
inline const Vec3 kReferenceOffsetEulerDeg{8.0, 10.0, -5.0};

/// Camera 3 m in front of the origin looking along +z.
PoseSE3 DefaultInitialPose();

struct Preset {
  std::string name;
  ServoConfig base;  ///< used as-is by single runs
  /// Bench sampling bounds.
  double max_offset_mm = 150.0;
  double max_offset_deg = 15.0;
  bool yaw_only = false;        ///< rotation offsets about camera z only
  double fixed_tilt_deg = 0.0;  ///< extra roll applied to every sample
};

const std::vector<Preset>& Presets();
/// nullptr when unknown.
const Preset* FindPreset(std::string_view name);

struct BenchmarkSummary {
  int trials = 0;
  int converged = 0;
  double rate = 0.0;
  double med_t_err_mm = 0.0;
  double med_r_err_deg = 0.0;
  double med_iters = 0.0;
};

/// Trial i samples its offset from Xorshift64Star(seed ^ SplitMix64(i)) and
/// uses noise seed SplitMix64(seed + i); results do not depend on
/// `threads` (0 = hardware concurrency).
BenchmarkSummary Benchmark(const Preset& preset, int n_trials,
                           std::uint64_t seed, int threads = 0);

/// Offset pose of one benchmark trial.
PoseSE3 SampleTrialOffset(const Preset& preset, std::uint64_t seed, int trial);

inline constexpr const char* kRunCsvHeader =
    "iter,tx,ty,tz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,t_err_mm,r_err_deg";

std::string RunCsv(const ServoRun& run);
nlohmann::ordered_json SummaryJson(const BenchmarkSummary& summary);

}  // namespace servobench
