// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "uniscene/nn/tensor.hpp"
#include "uniscene/train/checkpoint.hpp"
#include "uniscene/train/config.hpp"
#include "uniscene/train/dataset.hpp"
#include "uniscene/train/metrics.hpp"

namespace uniscene::train {

/// A training loss or update became NaN/Inf.
class TrainingDiverged : public nn::NumericError {
 public:
  using nn::NumericError::NumericError;
};

struct PretrainResult {
  Checkpoint checkpoint;  // stage pretrained, encoder + occupancy decoder
  std::vector<double> loss_curve;
};

/// Trains encoder + occupancy decoder against `samples[i].occupancy` with the
/// focal loss. Semantic grids are never read.
PretrainResult pretrain(std::span<const Sample> samples, const TrainConfig& config);

struct FinetuneResult {
  Checkpoint checkpoint;
  EvalReport report;  // on `held_out`, with the training loss curve attached
};

/// Semantic fine-tuning on a label_fraction subset of `train_samples`.
/// With `init` the encoder and depth head start from its weights (decoders are
/// discarded) and the result is tagged finetuned; without it everything is
/// random and the result is tagged scratch. Nothing is frozen.
FinetuneResult finetune(const Checkpoint* init, std::span<const Sample> train_samples,
                        std::span<const Sample> held_out, const TrainConfig& config);

/// Semantic checkpoints are scored on `semantic` grids (binary IoU over
/// non-free cells, per-class IoU, mIoU); occupancy checkpoints on `occupancy`
/// grids (binary IoU only). Throws for an empty set or a checkpoint without
/// any head.
EvalReport evaluate(const Checkpoint& ck, std::span<const Sample> samples, const TrainConfig& config);

/// Mean loss over `samples` without updating anything (occupancy head: focal,
/// semantic head: cross-entropy).
double dataset_loss(const nn::ModelParams& params, std::span<const Sample> samples, const TrainConfig& config);

}  // namespace uniscene::train
