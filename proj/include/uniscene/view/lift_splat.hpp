// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uniscene/nn/tensor.hpp"
#include "uniscene/occ/voxel_grid.hpp"
#include "uniscene/view/camera.hpp"

namespace uniscene::view {

/// Precomputed frustum-to-BEV scatter table for a fixed rig, frustum and grid.
///
/// Entry [(view * bins + bin) * pixels + pixel] holds the flat BEV cell
/// h * W + w receiving that frustum sample, or -1 when the sample falls
/// outside the grid's xy extent. Height is ignored at splat time.
struct SplatPlan {
  int views = 0;
  int bins = 0;
  int image_height = 0;
  int image_width = 0;
  int grid_height = 0;
  int grid_width = 0;
  std::vector<std::int32_t> cell;

  std::size_t pixels() const { return static_cast<std::size_t>(image_height) * static_cast<std::size_t>(image_width); }
  std::size_t bev_cells() const { return static_cast<std::size_t>(grid_height) * static_cast<std::size_t>(grid_width); }
};

/// Unprojects every (view, pixel, bin-center) sample and records its BEV cell.
/// All cameras must share image dimensions.
SplatPlan plan_splat(const CameraRig& rig, const FrustumSpec& frustum, const VoxelGridSpec& grid);

/// Bird's-eye-view feature map (C, H, W) over the xy extent of `spec`.
struct BevFeature {
  nn::Tensor data;
  VoxelGridSpec spec;
};

/// Per view: features (C, h, w) and depth distribution (bins, h, w). Every
/// sample accumulates depth_weight * feature into its BEV cell (sum pooling).
/// Differentiable with respect to both inputs.
BevFeature lift_splat(std::span<const nn::Tensor> features, std::span<const nn::Tensor> depth_dist,
                      const SplatPlan& plan, const VoxelGridSpec& spec);

/// Convenience overload that plans on every call.
BevFeature lift_splat(std::span<const nn::Tensor> features, std::span<const nn::Tensor> depth_dist,
                      const CameraRig& rig, const FrustumSpec& frustum, const VoxelGridSpec& spec);

}  // namespace uniscene::view
