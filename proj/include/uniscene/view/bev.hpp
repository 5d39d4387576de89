// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uniscene/view/lift_splat.hpp"

namespace uniscene::view {

/// BEV features lifted to a height axis: (C', D, H, W) with C = C' * D.
struct VoxelFeature {
  nn::Tensor data;
};

/// Reshapes (C, H, W) into (C / d, d, H, W): channel c becomes (c / d, c % d).
/// Throws nn::ShapeError when d does not divide C.
VoxelFeature bev_to_voxel(const BevFeature& bev, int d);

/// Inverse of bev_to_voxel.
BevFeature voxel_to_bev(const VoxelFeature& voxel, const VoxelGridSpec& spec);

}  // namespace uniscene::view
