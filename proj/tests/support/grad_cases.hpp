// SPDX-License-Identifier: Apache-2.0
// Random small instances of every differentiable op, reduced to a scalar by
// a random weighted sum so that every output element contributes.
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "uniscene/common/rng.hpp"
#include "uniscene/nn/grad_check.hpp"
#include "uniscene/nn/losses.hpp"
#include "uniscene/nn/ops.hpp"
#include "uniscene/view/bev.hpp"
#include "uniscene/view/lift_splat.hpp"

namespace grad_cases {

using uniscene::Rng;
using uniscene::nn::GradInput;
using uniscene::nn::ScalarFn;
using uniscene::nn::Shape;
using uniscene::nn::Tensor;

struct Case {
  std::string op;
  ScalarFn fn;
  std::vector<GradInput> inputs;
};

inline std::size_t dim(Rng& rng) { return 3 + rng.below(3); }

inline std::vector<double> uniform(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

// Values bounded away from zero so ReLU's kink stays out of the stencil.
inline std::vector<double> away_from_zero(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = (rng.below(2) ? 1.0 : -1.0) * rng.uniform(0.05, 1.0);
  return v;
}

inline GradInput input(std::string name, Shape shape, std::vector<double> values) {
  return {std::move(name), std::move(shape), std::move(values)};
}

inline ScalarFn weighted(Rng& rng, std::size_t n, std::function<Tensor(std::span<const Tensor>)> body) {
  auto w = uniform(rng, n);
  return [w, body](std::span<const Tensor> t) { return uniscene::nn::weighted_sum(body(t), w); };
}

inline Case conv2d_case(Rng& rng) {
  const std::size_t cin = 1 + rng.below(3), cout = 1 + rng.below(3), h = dim(rng), w = dim(rng);
  const std::size_t k = rng.below(2) ? 3 : 1;
  return {"conv2d",
          weighted(rng, cout * h * w,
                   [](std::span<const Tensor> t) { return uniscene::nn::conv2d(t[0], t[1], t[2]); }),
          {input("x", {cin, h, w}, uniform(rng, cin * h * w)),
           input("weight", {cout, cin, k, k}, uniform(rng, cout * cin * k * k)),
           input("bias", {cout}, uniform(rng, cout))}};
}

inline Case conv3d_case(Rng& rng) {
  const std::size_t cin = 1 + rng.below(2), cout = 1 + rng.below(2), d = dim(rng), h = dim(rng), w = dim(rng);
  return {"conv3d",
          weighted(rng, cout * d * h * w,
                   [](std::span<const Tensor> t) { return uniscene::nn::conv3d(t[0], t[1], t[2]); }),
          {input("x", {cin, d, h, w}, uniform(rng, cin * d * h * w)),
           input("weight", {cout, cin, 3, 3, 3}, uniform(rng, cout * cin * 27)),
           input("bias", {cout}, uniform(rng, cout))}};
}

inline Case relu_case(Rng& rng) {
  const std::size_t a = dim(rng), b = dim(rng);
  return {"relu", weighted(rng, a * b, [](std::span<const Tensor> t) { return uniscene::nn::relu(t[0]); }),
          {input("x", {a, b}, away_from_zero(rng, a * b))}};
}

inline Case sigmoid_case(Rng& rng) {
  const std::size_t a = dim(rng), b = dim(rng);
  return {"sigmoid", weighted(rng, a * b, [](std::span<const Tensor> t) { return uniscene::nn::sigmoid(t[0]); }),
          {input("x", {a, b}, uniform(rng, a * b, -3.0, 3.0))}};
}

inline Case softmax_case(Rng& rng) {
  const std::size_t a = dim(rng), b = dim(rng), c = dim(rng);
  return {"softmax_over_depth",
          weighted(rng, a * b * c, [](std::span<const Tensor> t) { return uniscene::nn::softmax_over_depth(t[0]); }),
          {input("x", {a, b, c}, uniform(rng, a * b * c, -2.0, 2.0))}};
}

inline Case reshape_case(Rng& rng) {
  const std::size_t a = dim(rng), b = dim(rng);
  return {"reshape",
          weighted(rng, a * b, [a, b](std::span<const Tensor> t) { return uniscene::nn::reshape(t[0], {b, a}); }),
          {input("x", {a, b}, uniform(rng, a * b))}};
}

inline Case add_case(Rng& rng) {
  const std::size_t a = dim(rng), b = dim(rng);
  return {"add", weighted(rng, a * b, [](std::span<const Tensor> t) { return uniscene::nn::add(t[0], t[1]); }),
          {input("a", {a, b}, uniform(rng, a * b)), input("b", {a, b}, uniform(rng, a * b))}};
}

inline Case scale_case(Rng& rng) {
  const std::size_t a = dim(rng), b = dim(rng);
  const double f = rng.uniform(-2.0, 2.0);
  return {"scale",
          weighted(rng, a * b, [f](std::span<const Tensor> t) { return uniscene::nn::scale(t[0], f); }),
          {input("x", {a, b}, uniform(rng, a * b))}};
}

inline Case lift_splat_case(Rng& rng) {
  using namespace uniscene;
  const VoxelGridSpec grid{{-4.0, -4.0, -2.0}, {1.0, 1.0, 1.0}, {2, 8, 8}};
  const view::FrustumSpec fr{4, 1.0, 5.0};
  view::CameraRig rig;
  const int w = 4, h = 3;
  for (int v = 0; v < 2; ++v) {
    const auto k = view::CameraIntrinsics::from_hfov(w, h, rng.uniform(0.8, 1.6));
    rig.cameras.push_back({k, view::camera_extrinsic(rng.uniform(-3.0, 3.0), rng.uniform(-0.3, 0.3))});
  }
  auto plan = std::make_shared<view::SplatPlan>(view::plan_splat(rig, fr, grid));
  std::vector<GradInput> in;
  for (int v = 0; v < 2; ++v) in.push_back(input("features" + std::to_string(v), {2, 3, 4}, uniform(rng, 24)));
  for (int v = 0; v < 2; ++v) in.push_back(input("depth" + std::to_string(v), {4, 3, 4}, uniform(rng, 48, 0.0, 1.0)));
  return {"lift_splat", weighted(rng, 2 * 64, [plan, grid](std::span<const Tensor> t) {
            return view::lift_splat(t.subspan(0, 2), t.subspan(2, 2), *plan, grid).data;
          }),
          std::move(in)};
}

inline Case focal_case(Rng& rng) {
  using namespace uniscene;
  const int d = 2, h = 3, w = 3;
  const VoxelGridSpec spec{{}, {1, 1, 1}, {d, h, w}};
  const std::size_t batch = 1 + rng.below(2);
  std::vector<OccupancyGrid> targets(batch, OccupancyGrid(spec));
  for (auto& t : targets)
    for (auto& c : t.data) c = static_cast<std::uint8_t>(rng.below(2));
  nn::FocalLossParams params{rng.uniform(0.5, 2.5), rng.uniform(0.5, 1.5), rng.uniform(0.0, 2.0)};
  std::vector<GradInput> in;
  for (std::size_t b = 0; b < batch; ++b) {
    in.push_back(input("p" + std::to_string(b), {2, 3, 3}, uniform(rng, 18, 0.05, 0.95)));
  }
  return {"focal_loss",
          [targets, params](std::span<const Tensor> t) { return nn::focal_loss(t, targets, params); },
          std::move(in)};
}

inline Case semantic_loss_case(Rng& rng) {
  using namespace uniscene;
  const VoxelGridSpec spec{{}, {1, 1, 1}, {2, 2, 3}};
  SemanticGrid target(spec);
  for (auto& c : target.data) c = static_cast<ClassId>(rng.below(4));
  std::vector<double> weights = uniform(rng, 4, 0.5, 2.0);
  std::vector<SemanticGrid> targets{target};
  return {"semantic_loss",
          [targets, weights](std::span<const Tensor> t) { return nn::semantic_loss(t, targets, weights); },
          {input("logits", {4, 2, 2, 3}, uniform(rng, 48, -2.0, 2.0))}};
}

inline std::vector<Case (*)(Rng&)> all_makers() {
  return {conv2d_case, conv3d_case,     relu_case,  sigmoid_case, softmax_case,      reshape_case,
          add_case,    scale_case,      lift_splat_case, focal_case, semantic_loss_case};
}

}  // namespace grad_cases
