// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>

#include "uniscene/synth/scene.hpp"

namespace uniscene::synth {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // need not be unit length; hit parameters scale with it
};

struct RayHit {
  double param = 0.0;  // hit point = origin + direction * param
  std::size_t primitive = 0;
};

/// Slab-method ray/AABB intersection. Returns the entry parameter when it is
/// positive, the exit parameter when the origin is inside, else nullopt.
std::optional<double> intersect_aabb(const Ray& ray, const Vec3& center, const Vec3& half_extents);

/// Ray/horizontal-plane intersection at positive parameter.
std::optional<double> intersect_ground(const Ray& ray, double plane_z);

/// Nearest hit with 0 < param <= max_param among the primitives at time t.
/// Equal parameters resolve to the lower primitive index.
std::optional<RayHit> cast_ray(const Scene& scene, const Ray& ray, double t, double max_param);

}  // namespace uniscene::synth
