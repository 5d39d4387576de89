// SPDX-License-Identifier: Apache-2.0
#include "uniscene/synth/raycast.hpp"

#include <algorithm>
#include <utility>

namespace uniscene::synth {

std::optional<double> intersect_aabb(const Ray& ray, const Vec3& center, const Vec3& half) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double o = ray.origin[axis];
    const double d = ray.direction[axis];
    const double lo = center[axis] - half[axis];
    const double hi = center[axis] + half[axis];
    if (d == 0.0) {
      if (o < lo || o > hi) return std::nullopt;
      continue;
    }
    double t0 = (lo - o) / d;
    double t1 = (hi - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_near > 0.0) return t_near;
  if (t_far > 0.0) return t_far;
  return std::nullopt;
}

std::optional<double> intersect_ground(const Ray& ray, double plane_z) {
  if (ray.direction.z == 0.0) return std::nullopt;
  const double t = (plane_z - ray.origin.z) / ray.direction.z;
  if (t > 0.0) return t;
  return std::nullopt;
}

std::optional<RayHit> cast_ray(const Scene& scene, const Ray& ray, double t, double max_param) {
  std::optional<RayHit> best;
  const auto& prims = scene.primitives();
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const auto& p = prims[i];
    const std::optional<double> hit = p.kind == PrimitiveKind::kGroundPlane
                                          ? intersect_ground(ray, p.center.z)
                                          : intersect_aabb(ray, p.center_at(t), p.half_extents);
    if (!hit || *hit > max_param) continue;
    if (!best || *hit < best->param) best = RayHit{*hit, i};
  }
  return best;
}

}  // namespace uniscene::synth
