// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uniscene/nn/losses.hpp"
#include "uniscene/nn/model.hpp"
#include "uniscene/occ/fusion.hpp"
#include "uniscene/occ/voxel_grid.hpp"
#include "uniscene/view/camera.hpp"

namespace uniscene::train {

enum class OptimizerKind { kSgd, kAdam };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view text);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
  bool operator==(const OptimizerConfig&) const = default;
};

/// Everything one training run depends on besides the data.
///
/// num_fusion_frames / dynamic_mode describe how this run's labels are fused:
/// occupancy labels for pre-training, semantic labels for fine-tuning.
struct TrainConfig {
  int epochs = 24;
  int batch = 4;
  OptimizerConfig optimizer;
  std::uint64_t seed = 42;
  int num_fusion_frames = 3;
  double label_fraction = 1.0;
  DynamicMode dynamic_mode = DynamicMode::kKeepAll;

  nn::FocalLossParams focal;
  std::vector<double> class_weights{1.0, 1.0, 1.0, 1.0};

  int encoder_width = 16;
  int voxel_channels = 4;
  int decoder_width = 16;
  int num_classes = 4;

  view::FrustumSpec frustum;
  VoxelGridSpec grid{{-6.0, -6.0, -2.0}, {1.0, 1.0, 1.0}, {4, 12, 12}};
  view::RigConfig rig;

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;
  nn::ModelConfig model_config() const;
  /// One `key = value` line per field in a fixed order.
  std::string canonical_text() const;
  /// SHA-1 of canonical_text().
  std::string hash() const;

  bool operator==(const TrainConfig&) const = default;
};

/// Inverse of canonical_text(). Every key must be present exactly once.
TrainConfig parse_train_config(std::string_view text);

/// Defaults for the fine-tuning stage: 12 epochs, 5-frame labels with
/// dynamic points of neighbouring sweeps dropped.
TrainConfig default_finetune_config();

}  // namespace uniscene::train
