// SPDX-License-Identifier: Apache-2.0
#include "uniscene/synth/raycast.hpp"
#include "uniscene/synth/sensors.hpp"

namespace uniscene::synth {

std::vector<Raster> render_views(const Scene& scene, const SE3Pose& ego_pose, double t,
                                 const view::CameraRig& rig, double max_depth) {
  rig.validate();
  std::vector<Raster> images;
  images.reserve(rig.size());
  const auto& prims = scene.primitives();
  for (const auto& cam : rig.cameras) {
    const auto& k = cam.intrinsics;
    const SE3Pose cam_to_world = ego_pose * cam.extrinsic;
    Raster img(kImageChannels, k.height, k.width);
    for (int i = 0; i < k.height; ++i) {
      for (int j = 0; j < k.width; ++j) {
        const double u = static_cast<double>(j) + 0.5;
        const double v = static_cast<double>(i) + 0.5;
        // Camera-frame direction with unit z: the hit parameter is the depth.
        const Vec3 dir_cam{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
        const Ray ray{cam_to_world.translation(), cam_to_world.rotate(dir_cam)};
        const auto hit = cast_ray(scene, ray, t, max_depth);
        if (!hit) continue;
        img.at(kInverseDepthChannel, i, j) = 1.0 / hit->param;
        const ClassId label = prims[hit->primitive].semantic_label;
        if (label != kFree) img.at(label, i, j) = 1.0;
      }
    }
    images.push_back(std::move(img));
  }
  return images;
}

}  // namespace uniscene::synth
