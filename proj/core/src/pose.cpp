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

#include "servobench/pose.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "servobench/error.hpp"

namespace servobench {

namespace {

constexpr double kMinQuaternionNorm = 1e-12;
constexpr double kSmallAngle = 1e-7;
constexpr double kUnitNormSlack = 1e-15;

}  // namespace

Vec4 UnitNormalize(const Vec4& raw) {
  const double norm = raw.norm();
  if (!(norm > kMinQuaternionNorm)) {
    throw Error(ErrorCode::kZeroQuaternion,
                "quaternion norm " + std::to_string(norm) + " <= 1e-12");
  }
  // Exact power-of-two prescale so the largest magnitude lies in (0.5, 1]:
  // q and 2^k q normalize to identical bits.
  int exponent = 0;
  const double fraction = std::frexp(raw.cwiseAbs().maxCoeff(), &exponent);
  const int shift = fraction == 0.5 ? exponent - 1 : exponent;
  Vec4 q;
  for (int i = 0; i < 4; ++i) q[i] = std::ldexp(raw[i], -shift);
  // Already unit to rounding: keep as-is so normalization is idempotent.
  const double norm2 = q.squaredNorm();
  if (std::abs(norm2 - 1.0) > kUnitNormSlack) q /= std::sqrt(norm2);
  return q;
}

UnitQuaternion UnitQuaternion::FromRaw(double w, double x, double y,
                                       double z) {
  const Vec4 q = UnitNormalize(Vec4(w, x, y, z));
  w = q[0];
  x = q[1];
  y = q[2];
  z = q[3];
  bool flip = w < 0.0;
  if (w == 0.0) {
    if (x != 0.0) {
      flip = x < 0.0;
    } else if (y != 0.0) {
      flip = y < 0.0;
    } else {
      flip = z < 0.0;
    }
  }
  if (flip) {
    // Negating keeps the canonical form identical for q and -q.
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  // -0.0 is not a distinct representation.
  return UnitQuaternion(w + 0.0, x + 0.0, y + 0.0, z + 0.0);
}

UnitQuaternion UnitQuaternion::FromAxisAngle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rotation axis has zero length");
  }
  const double s = std::sin(0.5 * angle) / n;
  return FromRaw(std::cos(0.5 * angle), s * axis.x(), s * axis.y(),
                 s * axis.z());
}

UnitQuaternion UnitQuaternion::RotX(double angle) {
  return FromAxisAngle(Vec3::UnitX(), angle);
}
UnitQuaternion UnitQuaternion::RotY(double angle) {
  return FromAxisAngle(Vec3::UnitY(), angle);
}
UnitQuaternion UnitQuaternion::RotZ(double angle) {
  return FromAxisAngle(Vec3::UnitZ(), angle);
}

UnitQuaternion UnitQuaternion::FromEulerXyzIntrinsic(double rx, double ry,
                                                     double rz) {
  return RotX(rx) * RotY(ry) * RotZ(rz);
}

UnitQuaternion UnitQuaternion::FromRotationMatrix(const Mat3& r) {
  // Shepperd's method: pick the largest diagonal term for stability.
  const double trace = r.trace();
  double w, x, y, z;
  if (trace >= r(0, 0) && trace >= r(1, 1) && trace >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(std::max(0.0, 1.0 + trace));
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s =
        2.0 * std::sqrt(std::max(0.0, 1.0 + r(0, 0) - r(1, 1) - r(2, 2)));
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) >= r(2, 2)) {
    const double s =
        2.0 * std::sqrt(std::max(0.0, 1.0 + r(1, 1) - r(0, 0) - r(2, 2)));
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s =
        2.0 * std::sqrt(std::max(0.0, 1.0 + r(2, 2) - r(0, 0) - r(1, 1)));
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  return FromRaw(w, x, y, z);
}

UnitQuaternion UnitQuaternion::Inverse() const {
  return FromRaw(w_, -x_, -y_, -z_);
}

Mat3 UnitQuaternion::ToRotationMatrix() const {
  const double ww = w_ * w_, xx = x_ * x_, yy = y_ * y_, zz = z_ * z_;
  const double xy = x_ * y_, xz = x_ * z_, yz = y_ * z_;
  const double wx = w_ * x_, wy = w_ * y_, wz = w_ * z_;
  Mat3 r;
  r << ww + xx - yy - zz, 2.0 * (xy - wz), 2.0 * (xz + wy),  //
      2.0 * (xy + wz), ww - xx + yy - zz, 2.0 * (yz - wx),   //
      2.0 * (xz - wy), 2.0 * (yz + wx), ww - xx - yy + zz;
  return r;
}

Vec3 UnitQuaternion::Rotate(const Vec3& v) const {
  const Vec3 u = vec();
  const Vec3 t = 2.0 * u.cross(v);
  return v + w_ * t + u.cross(t);
}

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return UnitQuaternion::FromRaw(
      a.w_ * b.w_ - a.x_ * b.x_ - a.y_ * b.y_ - a.z_ * b.z_,
      a.w_ * b.x_ + a.x_ * b.w_ + a.y_ * b.z_ - a.z_ * b.y_,
      a.w_ * b.y_ - a.x_ * b.z_ + a.y_ * b.w_ + a.z_ * b.x_,
      a.w_ * b.z_ + a.x_ * b.y_ - a.y_ * b.x_ + a.z_ * b.w_);
}

double RotationAngle(const UnitQuaternion& q) {
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

Vec3 EulerXyzIntrinsic(const UnitQuaternion& q) {
  const Mat3 r = q.ToRotationMatrix();
  const double sy = std::clamp(r(0, 2), -1.0, 1.0);
  const double ry = std::asin(sy);
  if (std::abs(sy) > 1.0 - 1e-12) {
    return Vec3(0.0, ry, std::atan2(r(1, 0), r(1, 1)));
  }
  return Vec3(std::atan2(-r(1, 2), r(2, 2)), ry, std::atan2(-r(0, 1), r(0, 0)));
}

AxisAngle QuatToAxisAngle(const UnitQuaternion& q) {
  const Vec3 v = q.vec();
  const double s = v.norm();
  if (s == 0.0) return {0.0, Vec3::UnitX()};
  // Canonical w >= 0 keeps theta in [0, pi].
  return {2.0 * std::atan2(s, q.w()), v / s};
}

UnitQuaternion AxisAngleToQuat(const AxisAngle& aa) {
  const double half = 0.5 * aa.theta;
  const Vec3 v = std::sin(half) * aa.axis;
  return UnitQuaternion::FromRaw(std::cos(half), v.x(), v.y(), v.z());
}

Vec3 Log(const UnitQuaternion& q) {
  const Vec3 v = q.vec();
  const double s = v.norm();
  const double theta = 2.0 * std::atan2(s, q.w());
  if (theta < kSmallAngle) {
    // theta / sin(theta/2) = 2 * (1 + theta^2 / 24 + O(theta^4)).
    return (2.0 + theta * theta / 12.0) * v;
  }
  return (theta / s) * v;
}

UnitQuaternion Exp(const Vec3& rotation_vector) {
  const double theta = rotation_vector.norm();
  if (theta < kSmallAngle) {
    // sin(theta/2)/theta = 1/2 - theta^2/48 + O(theta^4).
    const Vec3 v = (0.5 - theta * theta / 48.0) * rotation_vector;
    return UnitQuaternion::FromRaw(std::cos(0.5 * theta), v.x(), v.y(), v.z());
  }
  const Vec3 v = (std::sin(0.5 * theta) / theta) * rotation_vector;
  return UnitQuaternion::FromRaw(std::cos(0.5 * theta), v.x(), v.y(), v.z());
}

Mat4 PoseSE3::Matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation.ToRotationMatrix();
  m.topRightCorner<3, 1>() = translation;
  return m;
}

PoseSE3 Compose(const PoseSE3& a, const PoseSE3& b) {
  return {a.rotation * b.rotation,
          a.translation + a.rotation.Rotate(b.translation)};
}

PoseSE3 Inverse(const PoseSE3& a) {
  const UnitQuaternion r_inv = a.rotation.Inverse();
  return {r_inv, -r_inv.Rotate(a.translation)};
}

PoseSE3 Relative(const PoseSE3& from_world, const PoseSE3& to_world) {
  return Compose(Inverse(from_world), to_world);
}

double OrthonormalityError(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
}

Mat3 Orthonormalize(const Mat3& r) {
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

}  // namespace servobench
