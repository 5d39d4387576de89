// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "uniscene/common/rng.hpp"
#include "uniscene/synth/scene.hpp"
#include "uniscene/synth/sensors.hpp"

namespace uniscene::synth {

struct TrajectoryEntry {
  double timestamp = 0.0;
  SE3Pose pose;  // ego -> world
};

struct EgoTrajectory {
  std::vector<TrajectoryEntry> entries;

  /// Throws std::invalid_argument when empty, when timestamps are not strictly
  /// increasing, or when a rotation is not orthonormal.
  void validate() const;
};

/// Constant-speed drive along a gentle arc.
struct TrajectoryConfig {
  int num_poses = 9;
  double dt = 0.5;
  double speed_min = 2.0;
  double speed_max = 4.0;
  double yaw_rate_max = 0.1;  // rad/s, sampled uniformly in +-max
  double ego_height = 1.5;

  void validate() const;
};

EgoTrajectory make_trajectory(const TrajectoryConfig& config, Rng& rng);

struct MultiCameraFrame {
  std::vector<Raster> images;  // one per camera
  view::CameraRig rig;
  SE3Pose ego_pose;
  double timestamp = 0.0;
  PointCloud point_cloud;  // ego frame
  bool is_keyframe = false;
};

/// One frame per trajectory entry; frame k is a keyframe iff k % keyframe_stride == 0.
/// Throws std::invalid_argument for keyframe_stride < 1.
std::vector<MultiCameraFrame> generate_sequence(const Scene& scene, const EgoTrajectory& trajectory,
                                                const view::CameraRig& rig, const LidarSpec& lidar,
                                                int keyframe_stride, double camera_max_depth);

/// A generated drive plus the box annotations of its scene.
struct SequenceData {
  std::vector<MultiCameraFrame> frames;
  std::vector<BoxTrack> tracks;
};

struct BenchmarkConfig {
  std::uint64_t seed = 42;
  int num_sequences = 40;
  int keyframe_stride = 2;
  SceneConfig scene;
  TrajectoryConfig trajectory;
  view::CameraRig rig;
  LidarSpec lidar;
  double camera_max_depth = 20.0;
};

/// Sequence i uses seeds derived from (config.seed, i), so any sequence can be
/// regenerated on its own.
SequenceData generate_benchmark_sequence(const BenchmarkConfig& config, int index);
std::vector<SequenceData> generate_benchmark(const BenchmarkConfig& config);

/// Rounds point positions and image values to 32-bit floats, matching what
/// the on-disk formats preserve.
void quantize_for_storage(SequenceData& sequence);

}  // namespace uniscene::synth
