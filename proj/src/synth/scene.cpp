// SPDX-License-Identifier: Apache-2.0
#include "uniscene/synth/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uniscene/common/rng.hpp"

namespace uniscene::synth {

void SceneConfig::validate() const {
  if (num_static_boxes < 0 || num_dynamic_boxes < 0) throw std::invalid_argument("SceneConfig: negative count");
  if (num_static_boxes + num_dynamic_boxes > max_objects) {
    throw std::invalid_argument("SceneConfig: object count exceeds max_objects");
  }
  if (!(x_min < x_max) || !(static_lateral_min <= static_lateral_max) ||
      !(dynamic_lateral_min <= dynamic_lateral_max) || !(speed_min > 0.0 && speed_min <= speed_max)) {
    throw std::invalid_argument("SceneConfig: inconsistent ranges");
  }
  if (max_placement_attempts < 1) throw std::invalid_argument("SceneConfig: needs at least one placement attempt");
}

std::vector<BoxTrack> Scene::box_tracks() const {
  std::vector<BoxTrack> tracks;
  for (const auto& p : primitives_) {
    if (p.kind == PrimitiveKind::kBox) tracks.push_back({p.center, p.half_extents, p.velocity, p.semantic_label});
  }
  return tracks;
}

bool boxes_overlap(const ScenePrimitive& a, const ScenePrimitive& b, double t, double gap) {
  const Vec3 ca = a.center_at(t), cb = b.center_at(t);
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(ca[axis] - cb[axis]) > a.half_extents[axis] + b.half_extents[axis] + gap) return false;
  }
  return true;
}

double surface_distance(const ScenePrimitive& prim, const Vec3& p, double t) {
  if (prim.kind == PrimitiveKind::kGroundPlane) return std::abs(p.z - prim.center.z);
  const Vec3 c = prim.center_at(t);
  const Vec3 h = prim.half_extents;
  const double qx = std::abs(p.x - c.x) - h.x;
  const double qy = std::abs(p.y - c.y) - h.y;
  const double qz = std::abs(p.z - c.z) - h.z;
  const double outside = Vec3{std::max(qx, 0.0), std::max(qy, 0.0), std::max(qz, 0.0)}.norm();
  const double inside = std::min(std::max({qx, qy, qz}), 0.0);
  return std::abs(outside + inside);
}

namespace {

double signed_lateral(Rng& rng, double lo, double hi) {
  const double mag = rng.uniform(lo, hi);
  return rng.uniform() < 0.5 ? -mag : mag;
}

}  // namespace

Scene build_scene(std::uint64_t seed, const SceneConfig& config) {
  config.validate();
  Rng rng(seed);
  std::vector<ScenePrimitive> prims;
  prims.push_back({PrimitiveKind::kGroundPlane,
                   {0.0, 0.0, config.ground_z},
                   {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0},
                   {},
                   kGround});

  auto place = [&](bool dynamic) {
    for (int attempt = 0; attempt < config.max_placement_attempts; ++attempt) {
      ScenePrimitive box;
      box.kind = PrimitiveKind::kBox;
      if (dynamic) {
        box.half_extents = config.dynamic_half_extents;
        box.center = {rng.uniform(config.x_min, config.x_max),
                      signed_lateral(rng, config.dynamic_lateral_min, config.dynamic_lateral_max), 0.0};
        const double speed = rng.uniform(config.speed_min, config.speed_max);
        box.velocity = {rng.uniform() < 0.5 ? -speed : speed, 0.0, 0.0};
        box.semantic_label = kDynamicObject;
      } else {
        const auto& lo = config.static_half_min;
        const auto& hi = config.static_half_max;
        box.half_extents = {rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
        box.center = {rng.uniform(config.x_min, config.x_max),
                      signed_lateral(rng, config.static_lateral_min, config.static_lateral_max), 0.0};
        box.semantic_label = kStaticStructure;
      }
      box.center.z = config.ground_z + box.half_extents.z;
      const bool clash = std::any_of(prims.begin() + 1, prims.end(), [&](const ScenePrimitive& other) {
        return boxes_overlap(box, other, 0.0, config.min_gap);
      });
      if (!clash) {
        prims.push_back(box);
        return;
      }
    }
    throw std::runtime_error("build_scene: could not place non-overlapping boxes; object density too high");
  };

  for (int i = 0; i < config.num_static_boxes; ++i) place(false);
  for (int i = 0; i < config.num_dynamic_boxes; ++i) place(true);
  return Scene(std::move(prims));
}

}  // namespace uniscene::synth
