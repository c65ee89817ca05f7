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
/// Rigid-body algebra: unit quaternions (Hamilton, scalar-first), SE(3)
/// poses and the axis-angle parameterization used by the control law.
///
/// Conventions:
///  - A PoseSE3 `a_T_b` maps coordinates expressed in frame b into frame a,
///    i.e. p_a = R * p_b + t.
///  - Quaternions are kept canonical: unit norm, w >= 0, and when w == 0 the
///    first nonzero of (x, y, z) is positive.
///  - Lengths are meters and angles radians unless a name says otherwise.

#pragma once

#include <Eigen/Dense>
#include <optional>

namespace servobench {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kDegToRad = 0.017453292519943295;
inline constexpr double kRadToDeg = 57.295779513082323;

class UnitQuaternion {
 public:
  /// Identity rotation.
  UnitQuaternion() = default;

  /// Normalizes and canonicalizes. Throws Error(kZeroQuaternion) when
  /// ||(w,x,y,z)|| <= 1e-12.
  static UnitQuaternion FromRaw(double w, double x, double y, double z);
  static UnitQuaternion FromRaw(const Vec4& wxyz) {
    return FromRaw(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
  }

  /// Rotation about `axis` (need not be unit, must be nonzero) by `angle`.
  static UnitQuaternion FromAxisAngle(const Vec3& axis, double angle);
  static UnitQuaternion FromRotationMatrix(const Mat3& r);
  static UnitQuaternion RotX(double angle);
  static UnitQuaternion RotY(double angle);
  static UnitQuaternion RotZ(double angle);
  /// Intrinsic X-Y-Z Euler angles: R = Rx(rx) * Ry(ry) * Rz(rz).
  static UnitQuaternion FromEulerXyzIntrinsic(double rx, double ry, double rz);

  double w() const noexcept { return w_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double z() const noexcept { return z_; }
  Vec4 wxyz() const { return {w_, x_, y_, z_}; }
  Vec3 vec() const { return {x_, y_, z_}; }

  UnitQuaternion Inverse() const;
  Mat3 ToRotationMatrix() const;
  Vec3 Rotate(const Vec3& v) const;

  /// Hamilton product, renormalized and canonicalized.
  friend UnitQuaternion operator*(const UnitQuaternion& a,
                                  const UnitQuaternion& b);
  friend bool operator==(const UnitQuaternion&,
                         const UnitQuaternion&) = default;

 private:
  UnitQuaternion(double w, double x, double y, double z)
      : w_(w), x_(x), y_(y), z_(z) {}

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// q / ||q|| without sign canonicalization. Exactly idempotent, and exactly
/// invariant to scaling q by powers of two. Throws Error(kZeroQuaternion)
/// when ||q|| <= 1e-12.
Vec4 UnitNormalize(const Vec4& raw);

/// Normalize a raw 4-vector (w,x,y,z) into a canonical unit quaternion.
inline UnitQuaternion Canonicalize(const Vec4& raw) {
  return UnitQuaternion::FromRaw(raw);
}

struct AxisAngle {
  double theta = 0.0;  ///< radians, [0, pi]
  Vec3 axis = Vec3::UnitX();
};

/// theta in [0, pi]. The zero rotation maps to axis (1, 0, 0).
AxisAngle QuatToAxisAngle(const UnitQuaternion& q);
UnitQuaternion AxisAngleToQuat(const AxisAngle& aa);

/// Rotation vector theta*u of q, with a series expansion near identity.
Vec3 Log(const UnitQuaternion& q);
/// Exponential of a rotation vector.
UnitQuaternion Exp(const Vec3& rotation_vector);

/// Geodesic rotation angle of q in [0, pi].
double RotationAngle(const UnitQuaternion& q);

/// Inverse of FromEulerXyzIntrinsic: (rx, ry, rz) with ry in [-pi/2, pi/2].
/// At gimbal lock (|ry| = pi/2) rx is set to 0.
Vec3 EulerXyzIntrinsic(const UnitQuaternion& q);

struct PoseSE3 {
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();

  static PoseSE3 Identity() { return {}; }
  static PoseSE3 Translation(double x, double y, double z) {
    return {UnitQuaternion(), Vec3(x, y, z)};
  }
  static PoseSE3 Rotation(const UnitQuaternion& q) { return {q, Vec3::Zero()}; }

  /// 4x4 homogeneous matrix.
  Mat4 Matrix() const;

  /// Applies the transform to a point.
  Vec3 operator*(const Vec3& p) const {
    return rotation.Rotate(p) + translation;
  }
};

/// M(a) * M(b).
PoseSE3 Compose(const PoseSE3& a, const PoseSE3& b);
inline PoseSE3 operator*(const PoseSE3& a, const PoseSE3& b) {
  return Compose(a, b);
}
PoseSE3 Inverse(const PoseSE3& a);

/// Given world poses O_T_c (from) and O_T_c* (to), returns c_T_c* =
/// inverse(from) * to.
PoseSE3 Relative(const PoseSE3& from_world, const PoseSE3& to_world);

/// Largest entry of |R^T R - I| for the upper-left 3x3 block.
double OrthonormalityError(const Mat3& r);

/// Projects a near-rotation onto SO(3) (polar decomposition via SVD).
Mat3 Orthonormalize(const Mat3& r);

/// Translation + canonical quaternion pair p = [x, q], the regression
/// target and the estimator output.
struct PoseVector {
  Vec3 x = Vec3::Zero();
  UnitQuaternion q;

  static PoseVector FromPose(const PoseSE3& pose) {
    return {pose.translation, pose.rotation};
  }
  PoseSE3 ToPose() const { return {q, x}; }
};

}  // namespace servobench
