// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

namespace uniscene {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  bool operator==(const Vec3&) const = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }
  static Mat3 rot_x(double angle);
  static Mat3 rot_y(double angle);
  static Mat3 rot_z(double angle);
  /// Matrix whose columns are a, b, c.
  static Mat3 from_columns(const Vec3& a, const Vec3& b, const Vec3& c);

  double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 3 + c)]; }
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 3 + c)]; }

  Vec3 operator*(const Vec3& v) const;
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
  double determinant() const;
  bool operator==(const Mat3&) const = default;
};

/// Rigid transform p -> R p + t.
///
/// By convention an ego pose maps ego(t) coordinates into the world frame, and
/// a camera extrinsic maps camera coordinates into the ego frame.
class SE3Pose {
 public:
  SE3Pose() = default;
  /// Throws std::invalid_argument unless `rotation` is orthonormal with det +1 (1e-9).
  SE3Pose(const Mat3& rotation, const Vec3& translation);

  static SE3Pose identity() { return {}; }
  static SE3Pose translation_only(const Vec3& t) { return SE3Pose(Mat3::identity(), t); }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 rotate(const Vec3& v) const { return rotation_ * v; }

  /// (this * other)(p) = this(other(p)).
  SE3Pose operator*(const SE3Pose& other) const;
  SE3Pose inverse() const;

  bool operator==(const SE3Pose&) const = default;

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

/// True when RᵀR = I and det R = 1 within `tol`.
bool is_rotation(const Mat3& r, double tol = 1e-9);

}  // namespace uniscene
