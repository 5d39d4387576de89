// SPDX-License-Identifier: Apache-2.0
#include "uniscene/view/bev.hpp"

#include <string>

#include "uniscene/nn/ops.hpp"

namespace uniscene::view {

VoxelFeature bev_to_voxel(const BevFeature& bev, int d) {
  const auto& s = bev.data.shape();
  if (s.size() != 3) throw nn::ShapeError("bev_to_voxel: expected (C, H, W), got " + nn::to_string(s));
  if (d < 1 || s[0] % static_cast<std::size_t>(d) != 0) {
    throw nn::ShapeError("bev_to_voxel: " + std::to_string(d) + " does not divide C = " + std::to_string(s[0]));
  }
  const auto du = static_cast<std::size_t>(d);
  return {nn::reshape(bev.data, {s[0] / du, du, s[1], s[2]})};
}

BevFeature voxel_to_bev(const VoxelFeature& voxel, const VoxelGridSpec& spec) {
  const auto& s = voxel.data.shape();
  if (s.size() != 4) throw nn::ShapeError("voxel_to_bev: expected (C', D, H, W), got " + nn::to_string(s));
  return {nn::reshape(voxel.data, {s[0] * s[1], s[2], s[3]}), spec};
}

}  // namespace uniscene::view
