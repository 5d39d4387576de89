// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uniscene/nn/tensor.hpp"
#include "uniscene/view/lift_splat.hpp"
#include "uniscene/view/raster.hpp"

namespace uniscene::nn {

struct ModelConfig {
  int image_channels = 4;
  int encoder_width = 16;
  int voxel_channels = 4;  // C'; the encoder emits C = C' * grid_depth channels
  int grid_depth = 4;      // D
  int depth_bins = 16;
  int decoder_width = 16;
  int num_classes = 4;
  int kernel2d = 3;
  int kernel3d = 3;

  int bev_channels() const { return voxel_channels * grid_depth; }
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

// Parameter-name prefixes. The warm-start subset is encoder + depth head.
inline constexpr std::string_view kEncoderPrefix = "encoder.";
inline constexpr std::string_view kDepthHeadPrefix = "depth_head.";
inline constexpr std::string_view kOccupancyDecoderPrefix = "occ_decoder.";
inline constexpr std::string_view kSemanticHeadPrefix = "sem_head.";

bool is_encoder_param(std::string_view name);

struct ParamBlock {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

/// Named parameter blocks in a fixed order.
class ModelParams {
 public:
  void add(std::string name, Shape shape, std::vector<double> values);
  const std::vector<ParamBlock>& blocks() const { return blocks_; }
  std::vector<ParamBlock>& blocks() { return blocks_; }

  bool contains(std::string_view name) const;
  bool has_prefix(std::string_view prefix) const;
  const ParamBlock& get(std::string_view name) const;
  ParamBlock& get(std::string_view name);
  std::size_t total_size() const;

 private:
  std::vector<ParamBlock> blocks_;
};

enum class Heads { kOccupancy, kSemantic };

/// Encoder + depth head plus the requested head. Weights are uniform in
/// ±sqrt(6 / (fan_in + fan_out)), biases zero. Each block draws from a seed
/// derived from (seed, block name).
ModelParams init_params(const ModelConfig& config, Heads heads, std::uint64_t seed);
/// Adds randomly initialised blocks for a head to existing parameters.
void init_head(ModelParams& params, const ModelConfig& config, Heads head, std::uint64_t seed);

/// Parameters wrapped as graph leaves for one forward pass.
class BoundParams {
 public:
  BoundParams(const ModelParams& params, bool requires_grad);
  /// Binds caller-made tensors, one per block of `layout`, in block order.
  BoundParams(const ModelParams& layout, std::span<const Tensor> tensors);
  const Tensor& operator[](std::string_view name) const;
  /// Gradients in block order; zeros for blocks that received none.
  std::vector<std::vector<double>> gradients(const ModelParams& params) const;

 private:
  std::map<std::string, Tensor, std::less<>> tensors_;
};

/// Everything geometric a forward pass needs, built once per rig.
struct ForwardGeometry {
  view::CameraRig rig;
  view::FrustumSpec frustum;
  VoxelGridSpec grid;
  view::SplatPlan plan;

  ForwardGeometry(view::CameraRig rig, view::FrustumSpec frustum, VoxelGridSpec grid);
};

/// Images -> encoder -> depth softmax -> lift-splat -> (C', D, H, W).
Tensor encode_voxels(std::span<const Raster> images, const BoundParams& p, const ModelConfig& config,
                     const ForwardGeometry& geometry);

/// Occupancy probabilities (D, H, W) from voxel features.
Tensor occupancy_head(const Tensor& voxels, const BoundParams& p);
/// Class logits (K, D, H, W) from voxel features.
Tensor semantic_head(const Tensor& voxels, const BoundParams& p);

/// Full pretext forward pass: P in (0, 1) with the grid's (D, H, W) shape.
Tensor forward_occupancy(std::span<const Raster> images, const BoundParams& p, const ModelConfig& config,
                         const ForwardGeometry& geometry);
Tensor forward_semantic(std::span<const Raster> images, const BoundParams& p, const ModelConfig& config,
                        const ForwardGeometry& geometry);

}  // namespace uniscene::nn
