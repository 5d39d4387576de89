// SPDX-License-Identifier: Apache-2.0
#include "uniscene/train/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uniscene/common/rng.hpp"
#include "uniscene/occ/voxelize.hpp"

namespace uniscene::train {

std::vector<TimedCloud> keyframe_clouds(const synth::SequenceData& sequence) {
  std::vector<TimedCloud> out;
  for (const auto& f : sequence.frames) {
    if (f.is_keyframe) out.push_back({f.point_cloud, f.ego_pose, f.timestamp});
  }
  return out;
}

PointCloud fused_labels_cloud(const synth::SequenceData& sequence, std::size_t target, const LabelRecipe& recipe) {
  const auto clouds = keyframe_clouds(sequence);
  return occ::fuse_frames(clouds, target, recipe.frames, recipe.mode, sequence.tracks);
}

std::vector<Sample> build_samples(std::span<const synth::SequenceData> sequences, std::span<const int> indices,
                                  const VoxelGridSpec& grid, const LabelRecipe& occupancy_recipe,
                                  const LabelRecipe& semantic_recipe) {
  std::vector<Sample> out;
  for (int s : indices) {
    if (s < 0 || static_cast<std::size_t>(s) >= sequences.size()) {
      throw std::out_of_range("build_samples: sequence index " + std::to_string(s) + " out of range");
    }
    const auto& seq = sequences[static_cast<std::size_t>(s)];
    const auto clouds = keyframe_clouds(seq);
    int k = 0;
    for (const auto& frame : seq.frames) {
      if (!frame.is_keyframe) continue;
      Sample sample;
      sample.sequence = s;
      sample.keyframe = k;
      sample.images = frame.images;
      const auto target = static_cast<std::size_t>(k);
      sample.occupancy = occ::voxelize_occupancy(
          occ::fuse_frames(clouds, target, occupancy_recipe.frames, occupancy_recipe.mode, seq.tracks), grid);
      sample.semantic = occ::voxelize_semantic(
          occ::fuse_frames(clouds, target, semantic_recipe.frames, semantic_recipe.mode, seq.tracks), grid);
      out.push_back(std::move(sample));
      ++k;
    }
  }
  return out;
}

Split split_sequences(int count, double held_out_fraction) {
  if (count < 2) throw std::invalid_argument("split_sequences: need at least two sequences");
  if (!(held_out_fraction > 0.0 && held_out_fraction < 1.0)) {
    throw std::invalid_argument("split_sequences: held-out fraction must be in (0, 1)");
  }
  const int held = std::clamp(static_cast<int>(std::ceil(held_out_fraction * count - 1e-9)), 1, count - 1);
  Split split;
  for (int i = 0; i < count; ++i) (i < count - held ? split.train : split.held_out).push_back(i);
  return split;
}

std::vector<std::size_t> label_subset(std::size_t count, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("label_subset: fraction must be in (0, 1]");
  if (count == 0) return {};
  const auto take = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(count) - 1e-9)), 1, count);
  Rng rng(derive_seed(seed, "label_subset"));
  auto order = rng.permutation(count);
  order.resize(take);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace uniscene::train
