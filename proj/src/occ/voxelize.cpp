// SPDX-License-Identifier: Apache-2.0
#include "uniscene/occ/voxelize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uniscene {

void VoxelGridSpec::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (!(voxel_size[a] > 0.0) || !std::isfinite(voxel_size[a])) {
      throw std::invalid_argument("VoxelGridSpec: voxel_size must be positive");
    }
    if (dims[a] < 1) throw std::invalid_argument("VoxelGridSpec: dims must be >= 1");
  }
}

int half_open_index(double coord, double origin, double size, int count) {
  if (!std::isfinite(coord)) return -1;
  double f = std::floor((coord - origin) / size);
  if (f < -1.0 || f > static_cast<double>(count)) return -1;
  auto i = static_cast<long>(f);
  // The quotient can round across a face; settle against the face positions.
  if (origin + static_cast<double>(i) * size > coord) --i;
  else if (origin + static_cast<double>(i + 1) * size <= coord) ++i;
  if (i < 0 || i >= count) return -1;
  return static_cast<int>(i);
}

std::optional<std::array<int, 3>> VoxelGridSpec::locate(const Vec3& p) const {
  const int d = half_open_index(p.z, origin.z, voxel_size[0], dims[0]);
  if (d < 0) return std::nullopt;
  const int h = half_open_index(p.y, origin.y, voxel_size[1], dims[1]);
  if (h < 0) return std::nullopt;
  const int w = half_open_index(p.x, origin.x, voxel_size[2], dims[2]);
  if (w < 0) return std::nullopt;
  return std::array<int, 3>{d, h, w};
}

std::size_t OccupancyGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

OccupancyGrid SemanticGrid::occupancy() const {
  OccupancyGrid g(spec);
  for (std::size_t i = 0; i < data.size(); ++i) g.data[i] = data[i] != kFree ? 1 : 0;
  return g;
}

namespace occ {

OccupancyGrid voxelize_occupancy(const PointCloud& cloud, const VoxelGridSpec& spec) {
  spec.validate();
  OccupancyGrid grid(spec);
  for (const auto& p : cloud.points) {
    if (auto cell = spec.locate(p.position)) grid.data[spec.flat_index((*cell)[0], (*cell)[1], (*cell)[2])] = 1;
  }
  return grid;
}

SemanticGrid voxelize_semantic(const PointCloud& cloud, const VoxelGridSpec& spec) {
  spec.validate();
  std::vector<std::uint32_t> votes(spec.cell_count() * kNumClasses, 0);
  for (const auto& p : cloud.points) {
    if (p.label == kFree || p.label >= kNumClasses) {
      throw std::invalid_argument("voxelize_semantic: point label must be a non-free class");
    }
    if (auto cell = spec.locate(p.position)) {
      ++votes[spec.flat_index((*cell)[0], (*cell)[1], (*cell)[2]) * kNumClasses + p.label];
    }
  }
  SemanticGrid grid(spec);
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    const std::uint32_t* v = &votes[c * kNumClasses];
    std::uint32_t best = 0;
    ClassId label = kFree;
    for (int k = 0; k < kNumClasses; ++k) {
      if (v[k] > best) {  // strict: ties keep the smaller id
        best = v[k];
        label = static_cast<ClassId>(k);
      }
    }
    grid.data[c] = label;
  }
  return grid;
}

}  // namespace occ
}  // namespace uniscene
