// SPDX-License-Identifier: Apache-2.0
#include "uniscene/occ/fusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uniscene {

std::string_view to_string(DynamicMode mode) {
  switch (mode) {
    case DynamicMode::kKeepAll: return "keep_all";
    case DynamicMode::kDropDynamic: return "drop_dynamic";
    case DynamicMode::kCompensate: return "compensate";
  }
  return "keep_all";
}

DynamicMode parse_dynamic_mode(std::string_view text) {
  if (text == "keep_all") return DynamicMode::kKeepAll;
  if (text == "drop_dynamic") return DynamicMode::kDropDynamic;
  if (text == "compensate") return DynamicMode::kCompensate;
  throw std::invalid_argument("unknown dynamic mode '" + std::string(text) + "'");
}

bool BoxTrack::contains(const Vec3& p, double t, double tol) const {
  const Vec3 c = center_at(t);
  return std::abs(p.x - c.x) <= half_extents.x + tol && std::abs(p.y - c.y) <= half_extents.y + tol &&
         std::abs(p.z - c.z) <= half_extents.z + tol;
}

namespace occ {
namespace {

constexpr double kTrackMatchTolerance = 1e-6;

}  // namespace

std::pair<std::size_t, std::size_t> fusion_window(std::size_t count, std::size_t target, int num_frames) {
  if (num_frames < 1) throw std::invalid_argument("fuse_frames: num_frames must be >= 1");
  if (num_frames % 2 == 0) throw std::invalid_argument("fuse_frames: num_frames must be odd");
  if (static_cast<std::size_t>(num_frames) > count) {
    throw std::invalid_argument("fuse_frames: num_frames exceeds available keyframes");
  }
  if (target >= count) throw std::invalid_argument("fuse_frames: target index out of range");
  const std::size_t half = static_cast<std::size_t>(num_frames / 2);
  const std::size_t first = target >= half ? target - half : 0;
  const std::size_t last = std::min(count, target + half + 1);
  return {first, last};
}

PointCloud fuse_frames(std::span<const TimedCloud> keyframes, std::size_t target, int num_frames,
                       DynamicMode mode, std::span<const BoxTrack> tracks) {
  const auto [first, last] = fusion_window(keyframes.size(), target, num_frames);
  const TimedCloud& tgt = keyframes[target];
  const SE3Pose world_to_target = tgt.ego_pose.inverse();

  PointCloud out;
  out.frame = FrameTag::ego(tgt.timestamp);
  for (std::size_t k = first; k < last; ++k) {
    const TimedCloud& src = keyframes[k];
    if (k == target) {
      out.points.insert(out.points.end(), src.cloud.points.begin(), src.cloud.points.end());
      continue;
    }
    if (!(src.cloud.frame == FrameTag::ego(src.timestamp))) {
      throw std::invalid_argument("fuse_frames: sweep is not in its own ego frame");
    }
    const double dt = tgt.timestamp - src.timestamp;
    for (const auto& p : src.cloud.points) {
      if (p.dynamic && mode == DynamicMode::kDropDynamic) continue;
      Vec3 world = src.ego_pose.apply(p.position);
      if (p.dynamic && mode == DynamicMode::kCompensate) {
        const BoxTrack* match = nullptr;
        for (const auto& track : tracks) {
          if (track.velocity.norm() > 0.0 && track.contains(world, src.timestamp, kTrackMatchTolerance)) {
            match = &track;
            break;
          }
        }
        if (match == nullptr) continue;
        world += match->velocity * dt;
      }
      out.points.push_back({world_to_target.apply(world), p.label, p.dynamic});
    }
  }
  return out;
}

}  // namespace occ
}  // namespace uniscene
