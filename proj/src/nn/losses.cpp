// SPDX-License-Identifier: Apache-2.0
#include "uniscene/nn/losses.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace uniscene::nn {

void FocalLossParams::validate() const {
  if (!(alpha_pos >= 0.0) || !(alpha_neg >= 0.0) || !(gamma >= 0.0)) {
    throw std::invalid_argument("FocalLossParams: weights and gamma must be nonnegative");
  }
}

namespace {

void check_grid_shape(std::string_view op, const Shape& shape, const VoxelGridSpec& spec, std::size_t lead) {
  Shape expect;
  if (lead) expect.push_back(lead);
  for (int d : spec.dims) expect.push_back(static_cast<std::size_t>(d));
  if (shape != expect) {
    throw ShapeError(std::string(op) + ": prediction " + to_string(shape) + " does not match target " +
                     to_string(expect));
  }
}

}  // namespace

Tensor focal_loss(std::span<const Tensor> probs, std::span<const OccupancyGrid> targets,
                  const FocalLossParams& params) {
  params.validate();
  if (probs.empty() || probs.size() != targets.size()) {
    throw ShapeError("focal_loss: needs a nonempty batch with one target per prediction");
  }
  const double batch = static_cast<double>(probs.size());
  double total = 0.0;
  // Per-element d(loss)/dP, computed alongside the value.
  auto dloss = std::make_shared<std::vector<std::vector<double>>>(probs.size());
  for (std::size_t b = 0; b < probs.size(); ++b) {
    check_grid_shape("focal_loss", probs[b].shape(), targets[b].spec, 0);
    const auto p = probs[b].values();
    const auto& t = targets[b].data;
    const double norm = 1.0 / (batch * static_cast<double>(p.size()));
    auto& g = (*dloss)[b];
    g.resize(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
      const bool clamped = p[j] < kProbabilityFloor || p[j] > 1.0 - kProbabilityFloor;
      const double pc = std::clamp(p[j], kProbabilityFloor, 1.0 - kProbabilityFloor);
      const bool positive = t[j] != 0;
      const double pt = positive ? pc : 1.0 - pc;
      const double alpha = positive ? params.alpha_pos : params.alpha_neg;
      const double focus = std::pow(1.0 - pt, params.gamma);
      const double log_pt = std::log(pt);
      total += -alpha * focus * log_pt * norm;
      double dpt = 0.0;
      if (!clamped) {
        // d/dpt of -α (1-pt)^γ ln pt
        const double dfocus = params.gamma == 0.0 ? 0.0 : -params.gamma * std::pow(1.0 - pt, params.gamma - 1.0);
        dpt = -alpha * (dfocus * log_pt + focus / pt) * norm;
      }
      g[j] = positive ? dpt : -dpt;
    }
  }
  std::vector<Tensor> inputs(probs.begin(), probs.end());
  return Tensor::from_op("focal_loss", Shape{}, {total}, std::move(inputs),
                         [dloss](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           for (std::size_t b = 0; b < slots.size(); ++b) {
                             if (!slots[b]) continue;
                             const auto& g = (*dloss)[b];
                             for (std::size_t j = 0; j < g.size(); ++j) (*slots[b])[j] += go[0] * g[j];
                           }
                         });
}

Tensor semantic_loss(std::span<const Tensor> logits, std::span<const SemanticGrid> targets,
                     std::span<const double> class_weights) {
  if (logits.empty() || logits.size() != targets.size()) {
    throw ShapeError("semantic_loss: needs a nonempty batch with one target per prediction");
  }
  const std::size_t K = class_weights.size();
  if (K < 2) throw std::invalid_argument("semantic_loss: needs at least two classes");
  const double batch = static_cast<double>(logits.size());
  double total = 0.0;
  auto dloss = std::make_shared<std::vector<std::vector<double>>>(logits.size());
  for (std::size_t b = 0; b < logits.size(); ++b) {
    check_grid_shape("semantic_loss", logits[b].shape(), targets[b].spec, K);
    const auto z = logits[b].values();
    const auto& y = targets[b].data;
    const std::size_t P = y.size();
    const double norm = 1.0 / (batch * static_cast<double>(P));
    auto& g = (*dloss)[b];
    g.assign(z.size(), 0.0);
    for (std::size_t p = 0; p < P; ++p) {
      const std::size_t label = y[p];
      if (label >= K) throw std::invalid_argument("semantic_loss: label out of range");
      double mx = z[p];
      for (std::size_t k = 1; k < K; ++k) mx = std::max(mx, z[k * P + p]);
      double sum = 0.0;
      for (std::size_t k = 0; k < K; ++k) sum += std::exp(z[k * P + p] - mx);
      const double log_sum = std::log(sum) + mx;
      const double w = class_weights[label];
      total += w * (log_sum - z[label * P + p]) * norm;
      for (std::size_t k = 0; k < K; ++k) {
        const double prob = std::exp(z[k * P + p] - log_sum);
        g[k * P + p] = w * (prob - (k == label ? 1.0 : 0.0)) * norm;
      }
    }
  }
  std::vector<Tensor> inputs(logits.begin(), logits.end());
  return Tensor::from_op("semantic_loss", Shape{}, {total}, std::move(inputs),
                         [dloss](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           for (std::size_t b = 0; b < slots.size(); ++b) {
                             if (!slots[b]) continue;
                             const auto& g = (*dloss)[b];
                             for (std::size_t j = 0; j < g.size(); ++j) (*slots[b])[j] += go[0] * g[j];
                           }
                         });
}

}  // namespace uniscene::nn
