// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uniscene/synth/scene.hpp"
#include "uniscene/view/camera.hpp"
#include "uniscene/view/raster.hpp"

namespace uniscene::synth {

/// Spinning LiDAR at the ego origin.
struct LidarSpec {
  int elevation_channels = 8;
  int azimuth_steps = 180;
  double max_range = 20.0;
  double elevation_min = -0.4363323129985824;  // -25 deg
  double elevation_max = 0.08726646259971647;  // +5 deg

  void validate() const;
  double elevation(int channel) const;
  double azimuth(int step) const;
  /// Unit ray direction in the ego frame.
  Vec3 direction(int channel, int step) const;
  bool operator==(const LidarSpec&) const = default;
};

/// One sweep at time t from `ego_pose`, ordered channel-major then azimuth.
/// Each ray yields at most one point: its nearest hit within max_range,
/// expressed in the ego frame and tagged with the hit primitive's label and
/// motion flag.
PointCloud simulate_lidar(const Scene& scene, const SE3Pose& ego_pose, double t, const LidarSpec& spec);

// Image channels produced by render_views.
inline constexpr int kInverseDepthChannel = 0;
inline constexpr int kImageChannels = 1 + (kNumClasses - 1);  // inverse depth + one-hot of classes 1..3

/// Per-camera rasters: channel 0 holds 1/depth of the nearest hit (0 when
/// nothing is hit within `max_depth`), channel c >= 1 is the one-hot plane of
/// class c.
std::vector<Raster> render_views(const Scene& scene, const SE3Pose& ego_pose, double t,
                                 const view::CameraRig& rig, double max_depth);

}  // namespace uniscene::synth
