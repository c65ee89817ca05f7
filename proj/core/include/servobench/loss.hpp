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

#pragma once

#include "servobench/pose.hpp"

namespace servobench {

/// Weight of the rotation term in the pose regression loss.
inline constexpr double kDefaultBeta = 500000.0;

struct LossConfig {
  double beta = kDefaultBeta;
};

/// ||x_pred - x_gt|| + beta * ||q_pred_raw - q_gt_raw / ||q_gt_raw||||.
///
/// Only the ground-truth quaternion is normalized; the prediction enters
/// raw, so the loss penalizes an unnormalized rotation head. Throws
/// Error(kZeroQuaternion) if ||q_gt_raw|| <= 1e-12.
double PoseLoss(const Vec3& x_pred, const Vec4& q_pred_raw, const Vec3& x_gt,
                const Vec4& q_gt_raw, const LossConfig& cfg = {});

/// 1000 * ||x_pred - x_gt||.
double TranslationErrorMm(const PoseVector& pred, const PoseVector& gt);

/// Geodesic angle of q_pred^-1 * q_gt, in [0, 180].
double RotationErrorDeg(const PoseVector& pred, const PoseVector& gt);

}  // namespace servobench
