// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "uniscene/occ/point_cloud.hpp"

namespace uniscene {

/// Regular grid over the ego frame of a target keyframe.
///
/// Axes are ordered Z x Y x X as (D, H, W). `origin` is the minimum corner in
/// (x, y, z); `voxel_size` is ordered like the dims: (v_Z, v_H, v_W).
struct VoxelGridSpec {
  Vec3 origin;
  std::array<double, 3> voxel_size{1.0, 1.0, 1.0};
  std::array<int, 3> dims{1, 1, 1};

  int depth() const { return dims[0]; }
  int height() const { return dims[1]; }
  int width() const { return dims[2]; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }
  std::size_t flat_index(int d, int h, int w) const {
    return (static_cast<std::size_t>(d) * static_cast<std::size_t>(dims[1]) + static_cast<std::size_t>(h)) *
               static_cast<std::size_t>(dims[2]) +
           static_cast<std::size_t>(w);
  }

  /// Throws std::invalid_argument on non-positive sizes or dims.
  void validate() const;

  /// (d, h, w) of the cell containing `p`, or nullopt outside the extent.
  std::optional<std::array<int, 3>> locate(const Vec3& p) const;

  bool operator==(const VoxelGridSpec&) const = default;
};

/// Index i with origin + i*size <= coord < origin + (i+1)*size, or -1 when
/// that index falls outside [0, count).
int half_open_index(double coord, double origin, double size, int count);

struct OccupancyGrid {
  VoxelGridSpec spec;
  std::vector<std::uint8_t> data;  // 0 free, 1 occupied; flat (d, h, w)

  explicit OccupancyGrid(const VoxelGridSpec& s = {}) : spec(s), data(s.cell_count(), 0) {}
  std::uint8_t at(int d, int h, int w) const { return data[spec.flat_index(d, h, w)]; }
  std::size_t occupied_count() const;
};

struct SemanticGrid {
  VoxelGridSpec spec;
  std::vector<ClassId> data;  // kFree for empty cells

  explicit SemanticGrid(const VoxelGridSpec& s = {}) : spec(s), data(s.cell_count(), kFree) {}
  ClassId at(int d, int h, int w) const { return data[spec.flat_index(d, h, w)]; }
  /// Binary occupancy implied by the nonzero classes.
  OccupancyGrid occupancy() const;
};

}  // namespace uniscene
