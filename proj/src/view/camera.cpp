// SPDX-License-Identifier: Apache-2.0
#include "uniscene/view/camera.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uniscene::view {

CameraIntrinsics CameraIntrinsics::from_hfov(int width, int height, double hfov_rad) {
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.fx = 0.5 * static_cast<double>(width) / std::tan(0.5 * hfov_rad);
  k.fy = k.fx;
  k.cx = 0.5 * static_cast<double>(width);
  k.cy = 0.5 * static_cast<double>(height);
  k.validate();
  return k;
}

void CameraIntrinsics::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("CameraIntrinsics: empty image");
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("CameraIntrinsics: focal lengths must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw std::invalid_argument("CameraIntrinsics: principal point outside the image");
  }
}

void CameraRig::validate() const {
  if (cameras.empty()) throw std::invalid_argument("CameraRig: needs at least one camera");
  for (const auto& cam : cameras) {
    cam.intrinsics.validate();
    if (!is_rotation(cam.extrinsic.rotation())) throw std::invalid_argument("CameraRig: extrinsic is not rigid");
  }
}

SE3Pose camera_extrinsic(double yaw, double pitch, const Vec3& position) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const Vec3 forward{cp * cy, cp * sy, -sp};
  const Vec3 right{sy, -cy, 0.0};
  const Vec3 down{-sp * cy, -sp * sy, -cp};  // forward x right
  return SE3Pose(Mat3::from_columns(right, down, forward), position);
}

CameraRig make_surround_rig(int count, const CameraIntrinsics& intrinsics, double pitch) {
  if (count < 1) throw std::invalid_argument("make_surround_rig: count must be >= 1");
  CameraRig rig;
  for (int i = 0; i < count; ++i) {
    const double yaw = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    rig.cameras.push_back({intrinsics, camera_extrinsic(yaw, pitch)});
  }
  return rig;
}

void RigConfig::validate() const {
  if (cameras < 1 || width < 1 || height < 1) throw std::invalid_argument("RigConfig: counts must be positive");
  if (!(hfov_deg > 0.0 && hfov_deg < 180.0)) throw std::invalid_argument("RigConfig: hfov_deg must be in (0, 180)");
  if (!(std::abs(pitch_deg) < 90.0)) throw std::invalid_argument("RigConfig: |pitch_deg| must be below 90");
}

CameraRig RigConfig::build() const {
  validate();
  const double deg = std::numbers::pi / 180.0;
  return make_surround_rig(cameras, CameraIntrinsics::from_hfov(width, height, hfov_deg * deg), pitch_deg * deg);
}

PixelProjection project(const Vec3& p, const CameraIntrinsics& k) {
  if (!(p.z > 0.0)) throw std::domain_error("project: point is not in front of the camera");
  return {k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy, p.z};
}

Vec3 unproject(double u, double v, double depth, const CameraIntrinsics& k, const SE3Pose& ext) {
  if (!(depth > 0.0)) throw std::domain_error("unproject: depth must be positive");
  const Vec3 cam{(u - k.cx) * depth / k.fx, (v - k.cy) * depth / k.fy, depth};
  return ext.apply(cam);
}

void FrustumSpec::validate() const {
  if (depth_bins < 2) throw std::invalid_argument("FrustumSpec: needs at least two depth bins");
  if (!(depth_min > 0.0) || !(depth_min < depth_max)) {
    throw std::invalid_argument("FrustumSpec: requires 0 < depth_min < depth_max");
  }
}

}  // namespace uniscene::view
