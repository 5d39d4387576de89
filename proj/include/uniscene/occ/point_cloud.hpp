// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "uniscene/occ/se3.hpp"

namespace uniscene {

using ClassId = std::uint8_t;

// Class table shared by LiDAR points, semantic grids and the semantic head.
inline constexpr ClassId kFree = 0;
inline constexpr ClassId kGround = 1;
inline constexpr ClassId kStaticStructure = 2;
inline constexpr ClassId kDynamicObject = 3;
inline constexpr int kNumClasses = 4;

/// Coordinate frame of a point set: the ego frame at a timestamp, or world.
struct FrameTag {
  enum class Kind { kEgo, kWorld };
  Kind kind = Kind::kEgo;
  double stamp = 0.0;  // meaningful for kEgo only

  static FrameTag ego(double t) { return {Kind::kEgo, t}; }
  static FrameTag world() { return {Kind::kWorld, 0.0}; }
  bool operator==(const FrameTag& o) const {
    return kind == o.kind && (kind == Kind::kWorld || stamp == o.stamp);
  }
};

struct LabeledPoint {
  Vec3 position;
  ClassId label = kFree;
  bool dynamic = false;

  bool operator==(const LabeledPoint&) const = default;
};

struct PointCloud {
  std::vector<LabeledPoint> points;
  FrameTag frame;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// A pose annotated with the frames it maps between.
struct FrameTransform {
  SE3Pose pose;
  FrameTag from;
  FrameTag to;
};

namespace occ {

/// Maps every position through `tf.pose`; labels and flags are preserved.
/// Throws std::invalid_argument when the cloud is not in `tf.from`.
PointCloud transform_points(const PointCloud& cloud, const FrameTransform& tf);

}  // namespace occ
}  // namespace uniscene
