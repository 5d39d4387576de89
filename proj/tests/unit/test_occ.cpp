// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "uniscene/common/rng.hpp"
#include "uniscene/occ/fusion.hpp"
#include "uniscene/occ/voxelize.hpp"
#include "uniscene/synth/sequence.hpp"
#include "uniscene/train/dataset.hpp"

using namespace uniscene;

namespace {

SE3Pose random_pose(Rng& rng) {
  const Mat3 r = Mat3::rot_z(rng.uniform(-3.0, 3.0)) * Mat3::rot_y(rng.uniform(-1.0, 1.0)) *
                 Mat3::rot_x(rng.uniform(-3.0, 3.0));
  return SE3Pose(r, {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)});
}

PointCloud random_cloud(Rng& rng, int n, FrameTag frame = FrameTag::ego(0.0), ClassId min_label = kFree) {
  PointCloud c;
  c.frame = frame;
  for (int i = 0; i < n; ++i) {
    c.points.push_back({{rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(-3, 3)},
                        static_cast<ClassId>(min_label + rng.below(4 - min_label)), rng.below(2) == 1});
  }
  return c;
}

const VoxelGridSpec kGrid{{-6.0, -6.0, -2.0}, {1.0, 1.0, 1.0}, {4, 12, 12}};

}  // namespace

TEST_CASE("se3 composition and inverse") {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const SE3Pose a = random_pose(rng);
    const SE3Pose b = random_pose(rng);
    CHECK(is_rotation(a.rotation()));
    CHECK(is_rotation((a * b).rotation()));
    const Vec3 p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vec3 q = (a * b).apply(p) - a.apply(b.apply(p));
    CHECK(q.norm() < 1e-12);
    CHECK((a.inverse().apply(a.apply(p)) - p).norm() < 1e-9);
  }
  Mat3 bad = Mat3::identity();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(SE3Pose(bad, {}), std::invalid_argument);
  Mat3 reflect = Mat3::identity();
  reflect(2, 2) = -1.0;
  CHECK_FALSE(is_rotation(reflect));
}

TEST_CASE("transform_points") {
  PointCloud c;
  c.frame = FrameTag::ego(1.0);
  c.points.push_back({{0, 0, 0}, kGround, false});
  c.points.push_back({{1, 2, 3}, kDynamicObject, true});

  const auto same = occ::transform_points(c, {SE3Pose::identity(), FrameTag::ego(1.0), FrameTag::world()});
  CHECK(same.points == c.points);
  CHECK(same.frame == FrameTag::world());

  const auto moved =
      occ::transform_points(c, {SE3Pose::translation_only({1, 0, 0}), FrameTag::ego(1.0), FrameTag::world()});
  CHECK(moved.points[0].position == Vec3{1, 0, 0});
  CHECK(moved.points[1].label == kDynamicObject);
  CHECK(moved.points[1].dynamic);

  CHECK_THROWS_AS(occ::transform_points(c, {SE3Pose::identity(), FrameTag::ego(2.0), FrameTag::world()}),
                  std::invalid_argument);

  Rng rng(9);
  const SE3Pose pose = random_pose(rng);
  const auto cloud = random_cloud(rng, 200, FrameTag::ego(1.0));
  const auto there = occ::transform_points(cloud, {pose, FrameTag::ego(1.0), FrameTag::world()});
  const auto back = occ::transform_points(there, {pose.inverse(), FrameTag::world(), FrameTag::ego(1.0)});
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((back.points[i].position - cloud.points[i].position).norm() < 1e-9);
  }
}

TEST_CASE("voxelize corner and empty cases") {
  PointCloud empty;
  CHECK(occ::voxelize_occupancy(empty, kGrid).occupied_count() == 0);

  PointCloud corner;
  corner.points.push_back({kGrid.origin, kGround, false});
  const auto g = occ::voxelize_occupancy(corner, kGrid);
  CHECK(g.occupied_count() == 1);
  CHECK(g.at(0, 0, 0) == 1);

  // The far face belongs to no cell; a point on an interior face goes up.
  PointCloud faces;
  faces.points.push_back({{6.0, 0.0, 0.0}, kGround, false});
  faces.points.push_back({{-5.0, -6.0, -2.0}, kGround, false});
  const auto f = occ::voxelize_occupancy(faces, kGrid);
  CHECK(f.occupied_count() == 1);
  CHECK(f.at(0, 0, 1) == 1);
}

TEST_CASE("voxelize matches the scanning oracle") {
  Rng rng(21);
  const VoxelGridSpec odd{{-5.3, -4.1, -1.7}, {0.7, 0.45, 0.6}, {5, 17, 13}};
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = random_cloud(rng, 2000);
    const auto grid = occ::voxelize_occupancy(cloud, odd);
    const auto expected = oracle::occupied_cells(cloud, odd);
    std::size_t count = 0;
    for (int d = 0; d < odd.dims[0]; ++d)
      for (int h = 0; h < odd.dims[1]; ++h)
        for (int w = 0; w < odd.dims[2]; ++w) {
          const bool want = expected.count({d, h, w}) > 0;
          count += want;
          CHECK(grid.at(d, h, w) == (want ? 1 : 0));
        }
    CHECK(grid.occupied_count() == count);
  }
}

TEST_CASE("voxelize_semantic majority with low-id ties") {
  PointCloud c;
  auto add = [&](double x, ClassId label) { c.points.push_back({{x, 0.5, 0.5}, label, false}); };
  add(0.1, 2);
  add(0.2, 2);
  add(0.3, 3);
  add(1.1, 2);
  add(1.2, 3);
  add(2.5, 3);
  add(2.6, 1);
  add(2.7, 1);
  add(2.8, 3);
  const VoxelGridSpec spec{{0, 0, 0}, {1, 1, 1}, {1, 1, 4}};
  const auto s = occ::voxelize_semantic(c, spec);
  CHECK(s.at(0, 0, 0) == 2);
  CHECK(s.at(0, 0, 1) == 2);
  CHECK(s.at(0, 0, 2) == 1);
  CHECK(s.at(0, 0, 3) == kFree);
}

TEST_CASE("semantic mask equals occupancy mask") {
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    const auto cloud = random_cloud(rng, 1500, FrameTag::ego(0.0), kGround);
    CHECK(occ::voxelize_semantic(cloud, kGrid).occupancy().data == occ::voxelize_occupancy(cloud, kGrid).data);
  }
}

TEST_CASE("rigid invariance under whole-voxel translation") {
  Rng rng(17);
  const auto cloud = random_cloud(rng, 3000);
  const Vec3 shift{2.0, -3.0, 1.0};
  const auto moved = occ::transform_points(cloud, {SE3Pose::translation_only(shift), cloud.frame, cloud.frame});
  VoxelGridSpec shifted = kGrid;
  shifted.origin = kGrid.origin + shift;
  CHECK(occ::voxelize_occupancy(moved, shifted).data == occ::voxelize_occupancy(cloud, kGrid).data);
}

TEST_CASE("fusion window placement") {
  using W = std::pair<std::size_t, std::size_t>;
  CHECK(occ::fusion_window(5, 2, 3) == W{1, 4});
  CHECK(occ::fusion_window(5, 0, 3) == W{0, 2});
  CHECK(occ::fusion_window(5, 4, 5) == W{2, 5});
  CHECK(occ::fusion_window(5, 1, 5) == W{0, 4});
  CHECK(occ::fusion_window(5, 2, 1) == W{2, 3});
}

namespace {

synth::SequenceData small_sequence(std::uint64_t seed, bool static_only) {
  synth::BenchmarkConfig bc;
  bc.seed = seed;
  bc.num_sequences = 1;
  bc.rig = view::RigConfig{}.build();
  if (static_only) bc.scene.num_dynamic_boxes = 0;
  return synth::generate_benchmark_sequence(bc, 0);
}

}  // namespace

TEST_CASE("fuse_frames contracts") {
  const auto seq = small_sequence(3, false);
  const auto frames = train::keyframe_clouds(seq);
  REQUIRE(frames.size() == 5);
  const auto one = occ::fuse_frames(frames, 2, 1, DynamicMode::kKeepAll);
  CHECK(one.points == frames[2].cloud.points);
  CHECK_THROWS_AS(occ::fuse_frames(frames, 2, 0, DynamicMode::kKeepAll), std::invalid_argument);
  CHECK_THROWS_AS(occ::fuse_frames(frames, 2, 2, DynamicMode::kKeepAll), std::invalid_argument);
  CHECK_THROWS_AS(occ::fuse_frames(frames, 2, 7, DynamicMode::kKeepAll), std::invalid_argument);
  CHECK_THROWS_AS(occ::fuse_frames(frames, 9, 1, DynamicMode::kKeepAll), std::invalid_argument);

  const auto keep = occ::fuse_frames(frames, 2, 5, DynamicMode::kKeepAll);
  const auto drop = occ::fuse_frames(frames, 2, 5, DynamicMode::kDropDynamic);
  std::size_t other_dynamic = 0;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (k == 2) continue;
    for (const auto& p : frames[k].cloud.points) other_dynamic += p.dynamic;
  }
  CHECK(other_dynamic > 0);
  CHECK(keep.size() - drop.size() == other_dynamic);
}

TEST_CASE("fused static points lie on surfaces") {
  const auto seq = small_sequence(8, true);
  const auto frames = train::keyframe_clouds(seq);
  const std::size_t target = 2;
  const auto fused = occ::fuse_frames(frames, target, 3, DynamicMode::kKeepAll);
  const SE3Pose to_world = frames[target].ego_pose;
  const auto& tracks = seq.tracks;
  for (const auto& p : fused.points) {
    const Vec3 w = to_world.apply(p.position);
    double best = std::abs(w.z);  // ground plane at z = 0
    for (const auto& t : tracks) best = std::min(best, std::abs(oracle::box_surface_distance(w, t.center, t.half_extents)));
    CHECK(best < 1e-6);
  }
}

TEST_CASE("compensated dynamic points land on their object at target time") {
  const auto seq = small_sequence(5, false);
  const auto frames = train::keyframe_clouds(seq);
  const std::size_t target = 2;
  const auto fused = occ::fuse_frames(frames, target, 5, DynamicMode::kCompensate, seq.tracks);
  const double t = frames[target].timestamp;
  const SE3Pose to_world = frames[target].ego_pose;
  std::size_t dynamic = 0;
  for (const auto& p : fused.points) {
    if (!p.dynamic) continue;
    ++dynamic;
    const Vec3 w = to_world.apply(p.position);
    double best = 1e9;
    for (const auto& track : seq.tracks) {
      if (track.velocity.norm() == 0.0) continue;
      best = std::min(best, std::abs(oracle::box_surface_distance(w, track.center_at(t), track.half_extents)));
    }
    CHECK(best < 1e-5);
  }
  CHECK(dynamic > 0);
}

TEST_CASE("fusion is monotone in frame count") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto seq = small_sequence(seed, false);
    for (std::size_t target = 0; target < 5; ++target) {
      std::size_t prev = 0;
      for (int frames : {1, 3, 5}) {
        const auto cloud = train::fused_labels_cloud(seq, target, {frames, DynamicMode::kKeepAll});
        const std::size_t count = occ::voxelize_occupancy(cloud, kGrid).occupied_count();
        CHECK(count >= prev);
        prev = count;
      }
    }
  }
}
