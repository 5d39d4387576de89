// SPDX-License-Identifier: Apache-2.0
#include "uniscene/occ/point_cloud.hpp"

#include <stdexcept>

namespace uniscene::occ {

PointCloud transform_points(const PointCloud& cloud, const FrameTransform& tf) {
  if (!(cloud.frame == tf.from)) {
    throw std::invalid_argument("transform_points: cloud frame does not match the transform source");
  }
  PointCloud out;
  out.frame = tf.to;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    out.points.push_back({tf.pose.apply(p.position), p.label, p.dynamic});
  }
  return out;
}

}  // namespace uniscene::occ
