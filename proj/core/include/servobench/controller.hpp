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
/// Position-based visual servoing law with decoupled translation and
/// rotation:
///
///   v = -lambda * (c*_R_c)^T * c*_t_c
///   w = -lambda * theta * u        (theta * u: axis-angle of c*_R_c)
///
/// The input is the estimator's c_T_c*; the law needs c*_T_c, so the
/// inversion happens here and nowhere else.

#pragma once

#include <optional>

#include "servobench/pose.hpp"

namespace servobench {

struct Twist {
  Vec3 v = Vec3::Zero();  ///< m/s, current camera frame
  Vec3 w = Vec3::Zero();  ///< rad/s, current camera frame
};

enum class DofMode { kSix, kFour };

struct ControlConfig {
  double lambda = 1.0;  ///< 1/s
  DofMode dof_mode = DofMode::kSix;
  /// Optional saturation, off by default.
  std::optional<double> max_linear_speed;
  std::optional<double> max_angular_speed;

  void Validate() const;
};

/// The control law applied to c_T_c*. No projection or saturation.
Twist PbvsTwist(const PoseVector& rel, const ControlConfig& cfg);

/// Suppresses roll and pitch rates (w.x, w.y) for an under-actuated
/// platform; v and w.z pass through.
Twist Project4Dof(const Twist& t);

/// Scales v and w independently so their norms respect the configured caps.
Twist Saturate(const Twist& t, const ControlConfig& cfg);

/// Full command: law, then 4-DOF projection if configured, then saturation.
Twist Command(const PoseVector& rel, const ControlConfig& cfg);

}  // namespace servobench
