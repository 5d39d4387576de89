// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

#include "uniscene/occ/point_cloud.hpp"

namespace uniscene {

/// Treatment of dynamic-flagged points from non-target frames during fusion.
enum class DynamicMode { kKeepAll, kDropDynamic, kCompensate };

std::string_view to_string(DynamicMode mode);
/// Accepts "keep_all", "drop_dynamic", "compensate"; throws otherwise.
DynamicMode parse_dynamic_mode(std::string_view text);

/// A LiDAR sweep in its own ego frame together with the ego pose at capture.
struct TimedCloud {
  PointCloud cloud;  // frame == FrameTag::ego(timestamp)
  SE3Pose ego_pose;  // ego(timestamp) -> world
  double timestamp = 0.0;
};

/// Box annotation with constant-velocity motion: center(t) = center + velocity * t.
struct BoxTrack {
  Vec3 center;
  Vec3 half_extents;
  Vec3 velocity;
  ClassId label = kFree;

  Vec3 center_at(double t) const { return center + velocity * t; }
  bool contains(const Vec3& p, double t, double tol) const;
};

namespace occ {

/// Half-open index range [first, last) of the fusion window: `num_frames`
/// keyframes centered on `target`, clipped at the sequence ends.
std::pair<std::size_t, std::size_t> fusion_window(std::size_t count, std::size_t target, int num_frames);

/// Fuses keyframe sweeps into the ego frame of `keyframes[target]`.
///
/// The target sweep contributes its points unchanged. Other sweeps are mapped
/// ego(t_k) -> world -> ego(t_target). In kCompensate mode a dynamic point is
/// first matched to the track containing it at t_k and shifted by that track's
/// displacement to t_target; unmatched dynamic points are dropped. `tracks` is
/// only consulted in kCompensate mode.
///
/// Throws std::invalid_argument for num_frames < 1, even counts, counts above
/// the number of keyframes, or an out-of-range target.
PointCloud fuse_frames(std::span<const TimedCloud> keyframes, std::size_t target, int num_frames,
                       DynamicMode mode, std::span<const BoxTrack> tracks = {});

}  // namespace occ
}  // namespace uniscene
