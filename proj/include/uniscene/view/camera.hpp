// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uniscene/occ/se3.hpp"

namespace uniscene::view {

/// Pinhole intrinsics. Pixel (row i, col j) is sampled at (u, v) = (j + 0.5, i + 0.5).
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  /// Square pixels, principal point at the image center.
  static CameraIntrinsics from_hfov(int width, int height, double hfov_rad);
  void validate() const;
  bool operator==(const CameraIntrinsics&) const = default;
};

struct Camera {
  CameraIntrinsics intrinsics;
  SE3Pose extrinsic;  // camera -> ego
  bool operator==(const Camera&) const = default;
};

struct CameraRig {
  std::vector<Camera> cameras;

  std::size_t size() const { return cameras.size(); }
  void validate() const;
  bool operator==(const CameraRig&) const = default;
};

/// Camera -> ego transform for a camera at `position` looking along `yaw`
/// (counter-clockwise from ego +x) tilted down by `pitch`. Camera axes are
/// x right, y down, z forward; ego axes are x forward, y left, z up.
SE3Pose camera_extrinsic(double yaw, double pitch, const Vec3& position = {});

/// `count` identical cameras at yaw multiples of 2*pi/count.
CameraRig make_surround_rig(int count, const CameraIntrinsics& intrinsics, double pitch);

/// The handful of numbers that define a surround rig.
struct RigConfig {
  int cameras = 6;
  int width = 16;
  int height = 8;
  double hfov_deg = 60.0;
  double pitch_deg = 15.0;

  void validate() const;
  CameraRig build() const;
  bool operator==(const RigConfig&) const = default;
};

struct PixelProjection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

/// Camera-frame point to pixel coordinates. Throws std::domain_error for z <= 0.
PixelProjection project(const Vec3& point_cam, const CameraIntrinsics& intr);

/// Pixel at camera depth `depth` mapped to the ego frame through `ext`.
/// Throws std::domain_error for depth <= 0.
Vec3 unproject(double u, double v, double depth, const CameraIntrinsics& intr, const SE3Pose& ext);

/// Uniform depth discretisation of each camera ray; samples at bin centers.
struct FrustumSpec {
  int depth_bins = 16;
  double depth_min = 1.0;
  double depth_max = 8.0;

  void validate() const;
  double bin_center(int k) const {
    return depth_min + (static_cast<double>(k) + 0.5) * (depth_max - depth_min) / static_cast<double>(depth_bins);
  }
  bool operator==(const FrustumSpec&) const = default;
};

}  // namespace uniscene::view
