// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uniscene/occ/fusion.hpp"
#include "uniscene/occ/voxel_grid.hpp"
#include "uniscene/synth/sequence.hpp"

namespace uniscene::train {

/// How a label grid is fused from keyframe sweeps.
struct LabelRecipe {
  int frames = 1;
  DynamicMode mode = DynamicMode::kKeepAll;
  bool operator==(const LabelRecipe&) const = default;
};

/// Camera images of one keyframe with its label grids. Pre-training reads
/// `occupancy` only; fine-tuning and evaluation read `semantic`.
struct Sample {
  int sequence = 0;
  int keyframe = 0;  // index among the sequence's keyframes
  std::vector<Raster> images;
  OccupancyGrid occupancy;
  SemanticGrid semantic;
};

/// Keyframe sweeps of a sequence, in order.
std::vector<TimedCloud> keyframe_clouds(const synth::SequenceData& sequence);

/// Fused, voxelized labels for keyframe `target` of `sequence`.
PointCloud fused_labels_cloud(const synth::SequenceData& sequence, std::size_t target, const LabelRecipe& recipe);

/// One sample per keyframe of each listed sequence, in (sequence, keyframe)
/// order. Occupancy grids come from `occupancy_recipe`, semantic grids from
/// `semantic_recipe`.
std::vector<Sample> build_samples(std::span<const synth::SequenceData> sequences, std::span<const int> indices,
                                  const VoxelGridSpec& grid, const LabelRecipe& occupancy_recipe,
                                  const LabelRecipe& semantic_recipe);

/// Sequence-level split: the last ceil(fraction * count) sequences are held out.
struct Split {
  std::vector<int> train;
  std::vector<int> held_out;
};
Split split_sequences(int count, double held_out_fraction = 0.2);

/// Sorted indices of a label subset of `count` training samples: the first
/// ceil(fraction * count) entries of a seeded permutation, so smaller
/// fractions are always contained in larger ones for the same seed.
std::vector<std::size_t> label_subset(std::size_t count, double fraction, std::uint64_t seed);

}  // namespace uniscene::train
