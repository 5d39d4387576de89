// SPDX-License-Identifier: Apache-2.0
#include "uniscene/occ/se3.hpp"

#include <stdexcept>

namespace uniscene {

Mat3 Mat3::rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Mat3{{1, 0, 0, 0, c, -s, 0, s, c}};
}

Mat3 Mat3::rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Mat3{{c, 0, s, 0, 1, 0, -s, 0, c}};
}

Mat3 Mat3::rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
}

Mat3 Mat3::from_columns(const Vec3& a, const Vec3& b, const Vec3& c) {
  return Mat3{{a.x, b.x, c.x, a.y, b.y, c.y, a.z, b.z, c.z}};
}

Vec3 Mat3::operator*(const Vec3& v) const {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
          m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
    }
  }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  }
  return r;
}

double Mat3::determinant() const {
  const auto& a = m;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

bool is_rotation(const Mat3& r, double tol) {
  const Mat3 rtr = r.transposed() * r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(rtr(i, j) - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return std::abs(r.determinant() - 1.0) <= tol;
}

SE3Pose::SE3Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!is_rotation(rotation_)) throw std::invalid_argument("SE3Pose: rotation is not orthonormal");
}

SE3Pose SE3Pose::operator*(const SE3Pose& other) const {
  SE3Pose r;
  r.rotation_ = rotation_ * other.rotation_;
  r.translation_ = rotation_ * other.translation_ + translation_;
  return r;
}

SE3Pose SE3Pose::inverse() const {
  SE3Pose r;
  r.rotation_ = rotation_.transposed();
  r.translation_ = r.rotation_ * (translation_ * -1.0);
  return r;
}

}  // namespace uniscene
