// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "uniscene/synth/sequence.hpp"
#include "uniscene/train/ablation.hpp"

namespace uniscene::cli {

/// Stage-specific training settings of a run file.
struct StageSettings {
  int epochs = 24;
  int batch = 4;
  train::OptimizerConfig optimizer;
  double label_fraction = 1.0;
};

/// Everything a run file can set. Files are `section.key = value` lines;
/// '#' starts a comment; unknown or repeated keys are errors and missing keys
/// keep their defaults.
struct RunConfig {
  std::uint64_t seed = 42;

  int num_sequences = 40;
  int keyframe_stride = 2;
  double held_out_fraction = 0.2;

  synth::SceneConfig scene;
  synth::TrajectoryConfig trajectory;
  view::RigConfig rig;
  double camera_max_depth = 20.0;
  synth::LidarSpec lidar;
  VoxelGridSpec grid{{-6.0, -6.0, -2.0}, {1.0, 1.0, 1.0}, {4, 12, 12}};
  view::FrustumSpec frustum;

  int encoder_width = 16;
  int voxel_channels = 4;
  int decoder_width = 16;

  train::LabelRecipe pretext{3, DynamicMode::kKeepAll};
  train::LabelRecipe semantic{5, DynamicMode::kDropDynamic};

  nn::FocalLossParams focal;
  std::vector<double> class_weights{1.0, 1.0, 1.0, 1.0};

  StageSettings pretrain{24, 4, {}, 1.0};
  StageSettings finetune{12, 4, {}, 1.0};

  /// Data seed for synthesis; derived from `seed`.
  std::uint64_t data_seed() const;
  /// Training seed shared by both stages; derived from `seed`.
  std::uint64_t train_seed() const;

  synth::BenchmarkConfig benchmark() const;
  /// Both stages, seeded with train_seed().
  train::Experiment experiment() const;

  std::string canonical_text() const;
  std::string hash() const;
};

/// Throws std::invalid_argument naming the line on malformed input.
RunConfig parse_run_config(std::string_view text);
/// Reads a file (or returns defaults for an empty path) and applies the
/// UNISCENE_SEED environment override.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace uniscene::cli
