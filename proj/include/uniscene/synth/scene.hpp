// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "uniscene/occ/fusion.hpp"
#include "uniscene/occ/point_cloud.hpp"

namespace uniscene::synth {

enum class PrimitiveKind { kGroundPlane, kBox };

/// One object of a synthetic world. Boxes are axis aligned and translate with
/// constant velocity; the ground plane sits at z = center.z with unbounded xy.
struct ScenePrimitive {
  PrimitiveKind kind = PrimitiveKind::kBox;
  Vec3 center;        // at t = 0, world frame
  Vec3 half_extents;  // unused for the ground plane
  Vec3 velocity;
  ClassId semantic_label = kFree;

  bool is_dynamic() const { return velocity.norm() > 0.0; }
  Vec3 center_at(double t) const { return center + velocity * t; }
  bool operator==(const ScenePrimitive&) const = default;
};

struct SceneConfig {
  int num_static_boxes = 6;
  int num_dynamic_boxes = 2;
  int max_objects = 16;
  double ground_z = 0.0;

  // Static structure is placed beside the driving corridor.
  double x_min = -10.0;
  double x_max = 22.0;
  double static_lateral_min = 2.5;
  double static_lateral_max = 8.0;
  Vec3 static_half_min{0.5, 0.5, 0.5};
  Vec3 static_half_max{2.0, 1.5, 1.5};

  // Dynamic objects drive along +-x in the lanes next to the ego.
  double dynamic_lateral_min = 2.5;
  double dynamic_lateral_max = 5.0;
  Vec3 dynamic_half_extents{1.8, 0.8, 0.8};
  double speed_min = 2.0;
  double speed_max = 5.0;

  double min_gap = 0.2;
  int max_placement_attempts = 200;

  void validate() const;
};

/// Immutable set of primitives. Index order is the tie-break order for ray hits.
class Scene {
 public:
  Scene() = default;
  explicit Scene(std::vector<ScenePrimitive> primitives) : primitives_(std::move(primitives)) {}

  const std::vector<ScenePrimitive>& primitives() const { return primitives_; }
  std::size_t size() const { return primitives_.size(); }

  /// Box annotations (all boxes, static and dynamic) for box-informed fusion.
  std::vector<BoxTrack> box_tracks() const;

  bool operator==(const Scene&) const = default;

 private:
  std::vector<ScenePrimitive> primitives_;
};

/// Ground plane first, then static boxes, then dynamic boxes. Boxes are
/// pairwise separated by at least `min_gap` at t = 0. Throws std::runtime_error
/// when placement does not succeed within the attempt budget, and
/// std::invalid_argument for invalid counts.
Scene build_scene(std::uint64_t seed, const SceneConfig& config);

/// True when the two boxes' closed extents intersect (touching counts).
bool boxes_overlap(const ScenePrimitive& a, const ScenePrimitive& b, double t, double gap = 0.0);

/// Distance from `p` to the surface of `prim` at time t.
double surface_distance(const ScenePrimitive& prim, const Vec3& p, double t);

}  // namespace uniscene::synth
