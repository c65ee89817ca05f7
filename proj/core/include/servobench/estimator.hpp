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
/// Relative-pose estimators used by the servo loop. Every estimator answers
/// with c_T_c*, the desired camera frame expressed in the current one.
///
/// External estimators are child processes speaking a line-delimited JSON
/// protocol (v1) on stdin/stdout:
///
///   child  -> {"v":1,"ready":true}                       once, at startup
///   parent -> {"v":1,"cur":"<path>.ppm","des":"<path>.ppm"}
///   child  -> {"v":1,"x":[x,y,z],"q":[w,qx,qy,qz]}
///          or {"v":1,"error":"<message>"}
///
/// Exactly one request is in flight at a time.

#pragma once

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "servobench/pose.hpp"
#include "servobench/scene.hpp"

namespace servobench {

/// Multiplicative noise: translation std is rel_sigma_t * ||t|| per axis,
/// rotation noise is an extra rotation about a uniformly random axis with
/// angle std rel_sigma_r * theta.
struct NoiseModel {
  double rel_sigma_t = 0.0;
  double rel_sigma_r = 0.0;
  std::uint64_t seed = 0;

  bool IsZero() const { return rel_sigma_t == 0.0 && rel_sigma_r == 0.0; }
  void Validate() const;
};

/// Ground-truth relative pose perturbed by `noise`. The perturbation for a
/// given (noise.seed, call_index) is fixed: the generator is
/// Xorshift64Star(noise.seed ^ SplitMix64(call_index)); draws are three
/// Gaussians for translation, three for the rotation axis, one for the angle.
PoseVector OracleEstimate(const PoseSE3& current, const PoseSE3& desired,
                          const NoiseModel& noise, std::uint64_t call_index);

/// What the servo loop talks to.
class PoseEstimator {
 public:
  virtual ~PoseEstimator() = default;
  virtual PoseVector Estimate(const PoseSE3& current,
                              const PoseSE3& desired) = 0;
};

class OracleEstimator final : public PoseEstimator {
 public:
  explicit OracleEstimator(NoiseModel noise) : noise_(noise) {
    noise_.Validate();
  }

  PoseVector Estimate(const PoseSE3& current, const PoseSE3& desired) override {
    return OracleEstimate(current, desired, noise_, calls_++);
  }

 private:
  NoiseModel noise_;
  std::uint64_t calls_ = 0;
};

struct ExternalEstimatorConfig {
  std::string command;     ///< run through /bin/sh -c
  double timeout_s = 10.0;  ///< per handshake and per request

  void Validate() const;
};

std::string FormatEstimateRequest(const std::filesystem::path& cur,
                                  const std::filesystem::path& des);

/// Parses a v1 response line. Throws Error(kProtocolError) on anything but a
/// well-formed pose reply; the quaternion is canonicalized.
PoseVector ParseEstimateResponse(std::string_view line);

/// A session with one estimator child process. Not thread-safe: callers
/// serialize access.
class ExternalClient {
 public:
  /// Spawns the child and waits for its handshake. Throws kTimeout,
  /// kProcessDead or kProtocolError.
  explicit ExternalClient(ExternalEstimatorConfig cfg);
  ~ExternalClient();

  ExternalClient(const ExternalClient&) = delete;
  ExternalClient& operator=(const ExternalClient&) = delete;

  /// Writes both images under the session workspace, sends one request and
  /// waits for one response. After a timeout the child is killed and the
  /// session is unusable.
  PoseVector Estimate(const Image& current, const Image& desired);

  const std::filesystem::path& workspace() const { return workspace_; }
  bool alive() const { return pid_ > 0; }

 private:
  using Clock = std::chrono::steady_clock;

  std::string ReadLine(Clock::time_point deadline);
  void WriteLine(const std::string& line);
  void Terminate();

  ExternalEstimatorConfig cfg_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::filesystem::path workspace_;
  std::uint64_t requests_ = 0;
};

/// Renders the current and desired views of `scene` and asks an external
/// estimator for the relative pose.
class ImageEstimator final : public PoseEstimator {
 public:
  ImageEstimator(std::unique_ptr<ExternalClient> client, PointScene scene,
                 CameraIntrinsics k, int splat_radius = kDefaultSplatRadius);

  PoseVector Estimate(const PoseSE3& current, const PoseSE3& desired) override;

 private:
  std::unique_ptr<ExternalClient> client_;
  PointScene scene_;
  CameraIntrinsics k_;
  int splat_radius_;
};

}  // namespace servobench
