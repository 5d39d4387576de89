// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uniscene/occ/voxel_grid.hpp"

namespace uniscene::occ {

/// Cell is occupied iff at least one point falls in its half-open extent.
/// Points outside the grid are dropped.
OccupancyGrid voxelize_occupancy(const PointCloud& cloud, const VoxelGridSpec& spec);

/// Majority label per occupied cell, ties to the smaller class id.
SemanticGrid voxelize_semantic(const PointCloud& cloud, const VoxelGridSpec& spec);

}  // namespace uniscene::occ
