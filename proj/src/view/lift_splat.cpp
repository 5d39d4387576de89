// SPDX-License-Identifier: Apache-2.0
#include "uniscene/view/lift_splat.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace uniscene::view {

SplatPlan plan_splat(const CameraRig& rig, const FrustumSpec& frustum, const VoxelGridSpec& grid) {
  rig.validate();
  frustum.validate();
  grid.validate();
  SplatPlan plan;
  plan.views = static_cast<int>(rig.size());
  plan.bins = frustum.depth_bins;
  plan.image_height = rig.cameras[0].intrinsics.height;
  plan.image_width = rig.cameras[0].intrinsics.width;
  plan.grid_height = grid.height();
  plan.grid_width = grid.width();
  plan.cell.assign(static_cast<std::size_t>(plan.views * plan.bins) * plan.pixels(), -1);
  for (int v = 0; v < plan.views; ++v) {
    const Camera& cam = rig.cameras[static_cast<std::size_t>(v)];
    if (cam.intrinsics.height != plan.image_height || cam.intrinsics.width != plan.image_width) {
      throw std::invalid_argument("plan_splat: cameras must share image dimensions");
    }
    for (int k = 0; k < plan.bins; ++k) {
      const double depth = frustum.bin_center(k);
      for (int i = 0; i < plan.image_height; ++i) {
        for (int j = 0; j < plan.image_width; ++j) {
          const Vec3 p = unproject(j + 0.5, i + 0.5, depth, cam.intrinsics, cam.extrinsic);
          const int h = half_open_index(p.y, grid.origin.y, grid.voxel_size[1], grid.height());
          const int w = half_open_index(p.x, grid.origin.x, grid.voxel_size[2], grid.width());
          if (h < 0 || w < 0) continue;
          const std::size_t pix = static_cast<std::size_t>(i * plan.image_width + j);
          plan.cell[static_cast<std::size_t>(v * plan.bins + k) * plan.pixels() + pix] = h * plan.grid_width + w;
        }
      }
    }
  }
  return plan;
}

BevFeature lift_splat(std::span<const nn::Tensor> features, std::span<const nn::Tensor> depth_dist,
                      const SplatPlan& plan, const VoxelGridSpec& spec) {
  using nn::Shape;
  using nn::ShapeError;
  if (features.size() != static_cast<std::size_t>(plan.views) || depth_dist.size() != features.size()) {
    throw ShapeError("lift_splat: expected " + std::to_string(plan.views) + " views");
  }
  if (spec.height() != plan.grid_height || spec.width() != plan.grid_width) {
    throw ShapeError("lift_splat: grid does not match the splat plan");
  }
  const std::size_t P = plan.pixels();
  const std::size_t C = features[0].shape().empty() ? 0 : features[0].shape()[0];
  const Shape fshape{C, static_cast<std::size_t>(plan.image_height), static_cast<std::size_t>(plan.image_width)};
  const Shape dshape{static_cast<std::size_t>(plan.bins), fshape[1], fshape[2]};
  for (std::size_t v = 0; v < features.size(); ++v) {
    if (features[v].shape() != fshape) {
      throw ShapeError("lift_splat: feature shape " + nn::to_string(features[v].shape()) + ", expected " +
                       nn::to_string(fshape));
    }
    if (depth_dist[v].shape() != dshape) {
      throw ShapeError("lift_splat: depth shape " + nn::to_string(depth_dist[v].shape()) + ", expected " +
                       nn::to_string(dshape));
    }
  }

  const std::size_t cells = plan.bev_cells();
  const auto bins = static_cast<std::size_t>(plan.bins);
  std::vector<double> out(C * cells, 0.0);
  // Views, bins, pixels and channels are reduced in a fixed order.
  for (std::size_t v = 0; v < features.size(); ++v) {
    const double* f = features[v].values().data();
    const double* dd = depth_dist[v].values().data();
    for (std::size_t k = 0; k < bins; ++k) {
      const std::int32_t* cell = plan.cell.data() + (v * bins + k) * P;
      for (std::size_t p = 0; p < P; ++p) {
        if (cell[p] < 0) continue;
        const double wt = dd[k * P + p];
        const auto c0 = static_cast<std::size_t>(cell[p]);
        for (std::size_t c = 0; c < C; ++c) out[c * cells + c0] += wt * f[c * P + p];
      }
    }
  }

  std::vector<nn::Tensor> inputs;
  auto fvals = std::make_shared<std::vector<std::vector<double>>>();
  auto dvals = std::make_shared<std::vector<std::vector<double>>>();
  for (std::size_t v = 0; v < features.size(); ++v) {
    inputs.push_back(features[v]);
    fvals->emplace_back(features[v].values().begin(), features[v].values().end());
  }
  for (std::size_t v = 0; v < depth_dist.size(); ++v) {
    inputs.push_back(depth_dist[v]);
    dvals->emplace_back(depth_dist[v].values().begin(), depth_dist[v].values().end());
  }
  auto table = std::make_shared<const std::vector<std::int32_t>>(plan.cell);
  const std::size_t V = features.size();

  BevFeature bev;
  bev.spec = spec;
  bev.data = nn::Tensor::from_op(
      "lift_splat", Shape{C, static_cast<std::size_t>(plan.grid_height), static_cast<std::size_t>(plan.grid_width)},
      std::move(out), std::move(inputs),
      [=](std::span<const double> go, std::span<std::vector<double>* const> slots) {
        for (std::size_t v = 0; v < V; ++v) {
          double* gf = slots[v] ? slots[v]->data() : nullptr;
          double* gd = slots[V + v] ? slots[V + v]->data() : nullptr;
          const double* f = (*fvals)[v].data();
          const double* dd = (*dvals)[v].data();
          for (std::size_t k = 0; k < bins; ++k) {
            const std::int32_t* cell = table->data() + (v * bins + k) * P;
            for (std::size_t p = 0; p < P; ++p) {
              if (cell[p] < 0) continue;
              const auto c0 = static_cast<std::size_t>(cell[p]);
              const double wt = dd[k * P + p];
              double acc = 0.0;
              for (std::size_t c = 0; c < C; ++c) {
                const double g = go[c * cells + c0];
                if (gf) gf[c * P + p] += wt * g;
                acc += g * f[c * P + p];
              }
              if (gd) gd[k * P + p] += acc;
            }
          }
        }
      });
  return bev;
}

BevFeature lift_splat(std::span<const nn::Tensor> features, std::span<const nn::Tensor> depth_dist,
                      const CameraRig& rig, const FrustumSpec& frustum, const VoxelGridSpec& spec) {
  return lift_splat(features, depth_dist, plan_splat(rig, frustum, spec), spec);
}

}  // namespace uniscene::view
