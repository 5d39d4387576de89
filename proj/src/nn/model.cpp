// SPDX-License-Identifier: Apache-2.0
#include "uniscene/nn/model.hpp"

#include <cmath>
#include <stdexcept>

#include "uniscene/common/rng.hpp"
#include "uniscene/nn/ops.hpp"
#include "uniscene/view/bev.hpp"

namespace uniscene::nn {

void ModelConfig::validate() const {
  if (image_channels < 1 || encoder_width < 1 || voxel_channels < 1 || grid_depth < 1 || depth_bins < 2 ||
      decoder_width < 1 || num_classes < 2) {
    throw std::invalid_argument("ModelConfig: widths must be positive, depth_bins >= 2, num_classes >= 2");
  }
  if (kernel2d < 1 || kernel2d % 2 == 0 || kernel3d < 1 || kernel3d % 2 == 0) {
    throw std::invalid_argument("ModelConfig: kernels must be odd");
  }
}

bool is_encoder_param(std::string_view name) {
  return name.starts_with(kEncoderPrefix) || name.starts_with(kDepthHeadPrefix);
}

void ModelParams::add(std::string name, Shape shape, std::vector<double> values) {
  if (contains(name)) throw std::invalid_argument("ModelParams: duplicate parameter " + name);
  if (numel(shape) != values.size()) throw ShapeError("ModelParams: value count mismatch for " + name);
  blocks_.push_back({std::move(name), std::move(shape), std::move(values)});
}

bool ModelParams::contains(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return true;
  }
  return false;
}

bool ModelParams::has_prefix(std::string_view prefix) const {
  for (const auto& b : blocks_) {
    if (b.name.starts_with(prefix)) return true;
  }
  return false;
}

const ParamBlock& ModelParams::get(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return b;
  }
  throw std::out_of_range("ModelParams: no parameter " + std::string(name));
}

ParamBlock& ModelParams::get(std::string_view name) {
  return const_cast<ParamBlock&>(std::as_const(*this).get(name));
}

std::size_t ModelParams::total_size() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.values.size();
  return n;
}

namespace {

void add_conv(ModelParams& params, const std::string& name, std::size_t cout, std::size_t cin, std::size_t k,
              int spatial_dims, std::uint64_t seed) {
  Shape shape{cout, cin};
  std::size_t taps = 1;
  for (int i = 0; i < spatial_dims; ++i) {
    shape.push_back(k);
    taps *= k;
  }
  const double bound = std::sqrt(6.0 / static_cast<double>(cin * taps + cout * taps));
  Rng rng(derive_seed(seed, name + ".weight"));
  std::vector<double> w(numel(shape));
  for (auto& v : w) v = rng.uniform(-bound, bound);
  params.add(name + ".weight", std::move(shape), std::move(w));
  params.add(name + ".bias", Shape{cout}, std::vector<double>(cout, 0.0));
}

}  // namespace

void init_head(ModelParams& params, const ModelConfig& c, Heads head, std::uint64_t seed) {
  c.validate();
  const auto cv = static_cast<std::size_t>(c.voxel_channels);
  const auto dw = static_cast<std::size_t>(c.decoder_width);
  const auto k3 = static_cast<std::size_t>(c.kernel3d);
  const std::string prefix(head == Heads::kOccupancy ? kOccupancyDecoderPrefix : kSemanticHeadPrefix);
  const std::size_t out = head == Heads::kOccupancy ? 1 : static_cast<std::size_t>(c.num_classes);
  add_conv(params, prefix + "conv1", dw, cv, k3, 3, seed);
  add_conv(params, prefix + "conv2", out, dw, k3, 3, seed);
}

ModelParams init_params(const ModelConfig& c, Heads heads, std::uint64_t seed) {
  c.validate();
  ModelParams params;
  const auto ew = static_cast<std::size_t>(c.encoder_width);
  const auto k2 = static_cast<std::size_t>(c.kernel2d);
  const std::string enc(kEncoderPrefix);
  add_conv(params, enc + "conv1", ew, static_cast<std::size_t>(c.image_channels), k2, 2, seed);
  add_conv(params, enc + "conv2", static_cast<std::size_t>(c.bev_channels()), ew, k2, 2, seed);
  add_conv(params, std::string(kDepthHeadPrefix) + "conv", static_cast<std::size_t>(c.depth_bins),
           static_cast<std::size_t>(c.bev_channels()), 1, 2, seed);
  init_head(params, c, heads, seed);
  return params;
}

BoundParams::BoundParams(const ModelParams& params, bool requires_grad) {
  for (const auto& b : params.blocks()) {
    tensors_.emplace(b.name, requires_grad ? Tensor::parameter(b.shape, b.values) : Tensor::constant(b.shape, b.values));
  }
}

BoundParams::BoundParams(const ModelParams& layout, std::span<const Tensor> tensors) {
  if (tensors.size() != layout.blocks().size()) throw ShapeError("BoundParams: tensor count does not match layout");
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i].shape() != layout.blocks()[i].shape) {
      throw ShapeError("BoundParams: shape mismatch for " + layout.blocks()[i].name);
    }
    tensors_.emplace(layout.blocks()[i].name, tensors[i]);
  }
}

const Tensor& BoundParams::operator[](std::string_view name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw std::out_of_range("BoundParams: no parameter " + std::string(name));
  return it->second;
}

std::vector<std::vector<double>> BoundParams::gradients(const ModelParams& params) const {
  std::vector<std::vector<double>> out;
  out.reserve(params.blocks().size());
  for (const auto& b : params.blocks()) {
    const auto g = (*this)[b.name].grad();
    if (g.empty()) {
      out.emplace_back(b.values.size(), 0.0);
    } else {
      out.emplace_back(g.begin(), g.end());
    }
  }
  return out;
}

ForwardGeometry::ForwardGeometry(view::CameraRig r, view::FrustumSpec f, VoxelGridSpec g)
    : rig(std::move(r)), frustum(f), grid(g), plan(view::plan_splat(rig, frustum, grid)) {}

namespace {

Tensor conv_layer2d(const Tensor& x, const BoundParams& p, const std::string& name) {
  return conv2d(x, p[name + ".weight"], p[name + ".bias"]);
}

Tensor conv_layer3d(const Tensor& x, const BoundParams& p, const std::string& name) {
  return conv3d(x, p[name + ".weight"], p[name + ".bias"]);
}

}  // namespace

Tensor encode_voxels(std::span<const Raster> images, const BoundParams& p, const ModelConfig& config,
                     const ForwardGeometry& geometry) {
  if (images.size() != geometry.rig.size()) {
    throw ShapeError("encode_voxels: " + std::to_string(images.size()) + " images for a rig of " +
                     std::to_string(geometry.rig.size()));
  }
  if (config.grid_depth != geometry.grid.depth() || config.depth_bins != geometry.frustum.depth_bins) {
    throw ShapeError("encode_voxels: model config does not match grid/frustum");
  }
  const std::string enc(kEncoderPrefix);
  const std::string depth(kDepthHeadPrefix);
  std::vector<Tensor> features, depth_dist;
  features.reserve(images.size());
  depth_dist.reserve(images.size());
  for (const auto& img : images) {
    if (img.channels != config.image_channels) throw ShapeError("encode_voxels: unexpected image channel count");
    const Tensor x = Tensor::constant(
        {static_cast<std::size_t>(img.channels), static_cast<std::size_t>(img.height),
         static_cast<std::size_t>(img.width)},
        img.data);
    const Tensor h = relu(conv_layer2d(x, p, enc + "conv1"));
    const Tensor f = relu(conv_layer2d(h, p, enc + "conv2"));
    depth_dist.push_back(softmax_over_depth(conv_layer2d(f, p, depth + "conv")));
    features.push_back(f);
  }
  const view::BevFeature bev = view::lift_splat(features, depth_dist, geometry.plan, geometry.grid);
  return view::bev_to_voxel(bev, config.grid_depth).data;
}

Tensor occupancy_head(const Tensor& voxels, const BoundParams& p) {
  const std::string dec(kOccupancyDecoderPrefix);
  const Tensor h = relu(conv_layer3d(voxels, p, dec + "conv1"));
  const Tensor logits = conv_layer3d(h, p, dec + "conv2");
  const auto& s = logits.shape();
  return sigmoid(reshape(logits, {s[1], s[2], s[3]}));
}

Tensor semantic_head(const Tensor& voxels, const BoundParams& p) {
  const std::string head(kSemanticHeadPrefix);
  const Tensor h = relu(conv_layer3d(voxels, p, head + "conv1"));
  return conv_layer3d(h, p, head + "conv2");
}

Tensor forward_occupancy(std::span<const Raster> images, const BoundParams& p, const ModelConfig& config,
                         const ForwardGeometry& geometry) {
  return occupancy_head(encode_voxels(images, p, config, geometry), p);
}

Tensor forward_semantic(std::span<const Raster> images, const BoundParams& p, const ModelConfig& config,
                        const ForwardGeometry& geometry) {
  return semantic_head(encode_voxels(images, p, config, geometry), p);
}

}  // namespace uniscene::nn
