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

#include "servobench/loss.hpp"

#include <cmath>

namespace servobench {

double PoseLoss(const Vec3& x_pred, const Vec4& q_pred_raw, const Vec3& x_gt,
                const Vec4& q_gt_raw, const LossConfig& cfg) {
  return (x_pred - x_gt).norm() +
         cfg.beta * (q_pred_raw - UnitNormalize(q_gt_raw)).norm();
}

double TranslationErrorMm(const PoseVector& pred, const PoseVector& gt) {
  return 1000.0 * (pred.x - gt.x).norm();
}

double RotationErrorDeg(const PoseVector& pred, const PoseVector& gt) {
  return RotationAngle(pred.q.Inverse() * gt.q) * kRadToDeg;
}

}  // namespace servobench
