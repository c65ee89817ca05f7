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

#include "servobench/controller.hpp"

#include <cmath>

#include "servobench/error.hpp"

namespace servobench {

void ControlConfig::Validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be > 0");
  }
  if (max_linear_speed && !(*max_linear_speed > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max linear speed must be > 0");
  }
  if (max_angular_speed && !(*max_angular_speed > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max angular speed must be > 0");
  }
}

Twist PbvsTwist(const PoseVector& rel, const ControlConfig& cfg) {
  const PoseSE3 desired_to_current = Inverse(rel.ToPose());  // c*_T_c
  const Mat3 r = desired_to_current.rotation.ToRotationMatrix();
  Twist out;
  out.v = -cfg.lambda * (r.transpose() * desired_to_current.translation);
  out.w = -cfg.lambda * Log(desired_to_current.rotation);
  return out;
}

Twist Project4Dof(const Twist& t) {
  return {t.v, Vec3(0.0, 0.0, t.w.z())};
}

Twist Saturate(const Twist& t, const ControlConfig& cfg) {
  Twist out = t;
  if (cfg.max_linear_speed) {
    const double n = out.v.norm();
    if (n > *cfg.max_linear_speed) out.v *= *cfg.max_linear_speed / n;
  }
  if (cfg.max_angular_speed) {
    const double n = out.w.norm();
    if (n > *cfg.max_angular_speed) out.w *= *cfg.max_angular_speed / n;
  }
  return out;
}

Twist Command(const PoseVector& rel, const ControlConfig& cfg) {
  Twist t = PbvsTwist(rel, cfg);
  if (cfg.dof_mode == DofMode::kFour) t = Project4Dof(t);
  return Saturate(t, cfg);
}

}  // namespace servobench
