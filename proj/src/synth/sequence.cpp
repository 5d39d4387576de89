// SPDX-License-Identifier: Apache-2.0
#include "uniscene/synth/sequence.hpp"

#include <stdexcept>
#include <string>

#include "uniscene/common/binary_io.hpp"

namespace uniscene::synth {

void EgoTrajectory::validate() const {
  if (entries.empty()) throw std::invalid_argument("EgoTrajectory: needs at least one pose");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!is_rotation(entries[i].pose.rotation())) throw std::invalid_argument("EgoTrajectory: non-rigid pose");
    if (i > 0 && !(entries[i].timestamp > entries[i - 1].timestamp)) {
      throw std::invalid_argument("EgoTrajectory: timestamps must be strictly increasing");
    }
  }
}

void TrajectoryConfig::validate() const {
  if (num_poses < 1) throw std::invalid_argument("TrajectoryConfig: needs at least one pose");
  if (!(dt > 0.0)) throw std::invalid_argument("TrajectoryConfig: dt must be positive");
  if (!(speed_min >= 0.0 && speed_min <= speed_max)) throw std::invalid_argument("TrajectoryConfig: bad speed range");
}

EgoTrajectory make_trajectory(const TrajectoryConfig& config, Rng& rng) {
  config.validate();
  const double speed = rng.uniform(config.speed_min, config.speed_max);
  const double yaw_rate = rng.uniform(-config.yaw_rate_max, config.yaw_rate_max);
  EgoTrajectory traj;
  double x = 0.0, y = 0.0, yaw = 0.0;
  for (int i = 0; i < config.num_poses; ++i) {
    const double t = config.dt * static_cast<double>(i);
    traj.entries.push_back({t, SE3Pose(Mat3::rot_z(yaw), {x, y, config.ego_height})});
    x += speed * config.dt * std::cos(yaw);
    y += speed * config.dt * std::sin(yaw);
    yaw += yaw_rate * config.dt;
  }
  return traj;
}

std::vector<MultiCameraFrame> generate_sequence(const Scene& scene, const EgoTrajectory& trajectory,
                                                const view::CameraRig& rig, const LidarSpec& lidar,
                                                int keyframe_stride, double camera_max_depth) {
  if (keyframe_stride < 1) throw std::invalid_argument("generate_sequence: keyframe_stride must be >= 1");
  trajectory.validate();
  std::vector<MultiCameraFrame> frames;
  frames.reserve(trajectory.entries.size());
  for (std::size_t k = 0; k < trajectory.entries.size(); ++k) {
    const auto& e = trajectory.entries[k];
    MultiCameraFrame f;
    f.images = render_views(scene, e.pose, e.timestamp, rig, camera_max_depth);
    f.rig = rig;
    f.ego_pose = e.pose;
    f.timestamp = e.timestamp;
    f.point_cloud = simulate_lidar(scene, e.pose, e.timestamp, lidar);
    f.is_keyframe = k % static_cast<std::size_t>(keyframe_stride) == 0;
    frames.push_back(std::move(f));
  }
  return frames;
}

SequenceData generate_benchmark_sequence(const BenchmarkConfig& config, int index) {
  const std::string tag = "sequence/" + std::to_string(index);
  const Scene scene = build_scene(derive_seed(config.seed, tag + "/scene"), config.scene);
  Rng traj_rng(derive_seed(config.seed, tag + "/trajectory"));
  const EgoTrajectory traj = make_trajectory(config.trajectory, traj_rng);
  SequenceData seq;
  seq.frames = generate_sequence(scene, traj, config.rig, config.lidar, config.keyframe_stride,
                                 config.camera_max_depth);
  seq.tracks = scene.box_tracks();
  return seq;
}

std::vector<SequenceData> generate_benchmark(const BenchmarkConfig& config) {
  if (config.num_sequences < 1) throw std::invalid_argument("generate_benchmark: needs at least one sequence");
  std::vector<SequenceData> out;
  out.reserve(static_cast<std::size_t>(config.num_sequences));
  for (int i = 0; i < config.num_sequences; ++i) out.push_back(generate_benchmark_sequence(config, i));
  return out;
}

void quantize_for_storage(SequenceData& sequence) {
  const auto q = round_to_f32;
  for (auto& f : sequence.frames) {
    for (auto& p : f.point_cloud.points) p.position = {q(p.position.x), q(p.position.y), q(p.position.z)};
    for (auto& img : f.images) {
      for (auto& v : img.data) v = q(v);
    }
  }
}

}  // namespace uniscene::synth
