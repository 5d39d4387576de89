// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "uniscene/nn/tensor.hpp"
#include "uniscene/occ/voxel_grid.hpp"

namespace uniscene::nn {

/// Class weights and focusing exponent of the binary occupancy focal loss.
///
/// Occupied voxels are weighted by alpha_pos and free voxels by alpha_neg.
/// Defaults: alpha_pos = 2, gamma = 0.25; alpha_neg = 1 replaces the
/// 1 - alpha = -1 weight a single-alpha formulation would give free voxels.
struct FocalLossParams {
  double alpha_pos = 2.0;
  double alpha_neg = 1.0;
  double gamma = 0.25;

  void validate() const;
  bool operator==(const FocalLossParams&) const = default;
};

// Probabilities are clamped to this band inside the losses only.
inline constexpr double kProbabilityFloor = 1e-7;

/// Batch focal loss
///   -(1/B)(1/n) Σ_i Σ_j α_t (1 - p_t)^γ ln p_t
/// with p_t = P, α_t = alpha_pos on occupied voxels and p_t = 1 - P,
/// α_t = alpha_neg on free voxels. Each probs[i] has shape (D, H, W) matching
/// targets[i].
Tensor focal_loss(std::span<const Tensor> probs, std::span<const OccupancyGrid> targets,
                  const FocalLossParams& params);

/// Mean per-voxel weighted cross-entropy of softmaxed class logits.
/// logits[i] has shape (K, D, H, W); class_weights has K entries.
Tensor semantic_loss(std::span<const Tensor> logits, std::span<const SemanticGrid> targets,
                     std::span<const double> class_weights);

}  // namespace uniscene::nn
