// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uniscene/synth/raycast.hpp"
#include "uniscene/synth/sensors.hpp"

namespace uniscene::synth {

void LidarSpec::validate() const {
  if (elevation_channels < 1) throw std::invalid_argument("LidarSpec: needs at least one channel");
  if (azimuth_steps < 4) throw std::invalid_argument("LidarSpec: needs at least four azimuth steps");
  if (!(max_range > 0.0)) throw std::invalid_argument("LidarSpec: max_range must be positive");
  if (!(elevation_min <= elevation_max)) throw std::invalid_argument("LidarSpec: inverted elevation range");
}

double LidarSpec::elevation(int channel) const {
  if (elevation_channels == 1) return elevation_min;
  return elevation_min + (elevation_max - elevation_min) * static_cast<double>(channel) /
                             static_cast<double>(elevation_channels - 1);
}

double LidarSpec::azimuth(int step) const {
  return 2.0 * std::numbers::pi * static_cast<double>(step) / static_cast<double>(azimuth_steps);
}

Vec3 LidarSpec::direction(int channel, int step) const {
  const double e = elevation(channel);
  const double a = azimuth(step);
  return {std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e)};
}

PointCloud simulate_lidar(const Scene& scene, const SE3Pose& ego_pose, double t, const LidarSpec& spec) {
  spec.validate();
  PointCloud cloud;
  cloud.frame = FrameTag::ego(t);
  const auto& prims = scene.primitives();
  for (int c = 0; c < spec.elevation_channels; ++c) {
    for (int s = 0; s < spec.azimuth_steps; ++s) {
      const Vec3 dir_ego = spec.direction(c, s);
      const Ray ray{ego_pose.translation(), ego_pose.rotate(dir_ego)};
      const auto hit = cast_ray(scene, ray, t, spec.max_range);
      if (!hit) continue;
      const auto& prim = prims[hit->primitive];
      // Unit direction, so the hit parameter is the range.
      cloud.points.push_back({dir_ego * hit->param, prim.semantic_label, prim.is_dynamic()});
    }
  }
  return cloud;
}

}  // namespace uniscene::synth
