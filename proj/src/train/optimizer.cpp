// SPDX-License-Identifier: Apache-2.0
#include "uniscene/train/optimizer.hpp"

#include <cmath>

namespace uniscene::train {

Optimizer::Optimizer(const OptimizerConfig& config, const nn::ModelParams& layout) : config_(config) {
  config_.validate();
  if (config_.kind == OptimizerKind::kAdam) {
    for (const auto& b : layout.blocks()) {
      m_.emplace_back(b.values.size(), 0.0);
      v_.emplace_back(b.values.size(), 0.0);
    }
  }
}

void Optimizer::step(nn::ModelParams& params, const std::vector<std::vector<double>>& grads) {
  auto& blocks = params.blocks();
  if (grads.size() != blocks.size()) throw nn::ShapeError("optimizer: gradient block count mismatch");
  if (config_.kind == OptimizerKind::kAdam && m_.size() != blocks.size()) {
    throw nn::ShapeError("optimizer: parameter layout changed since construction");
  }
  ++t_;
  const double lr = config_.learning_rate;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto& p = blocks[b].values;
    const auto& g = grads[b];
    if (g.size() != p.size()) throw nn::ShapeError("optimizer: gradient size mismatch for " + blocks[b].name);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double next;
      if (config_.kind == OptimizerKind::kSgd) {
        next = p[i] - lr * g[i];
      } else {
        double& m = m_[b][i];
        double& v = v_[b][i];
        m = config_.beta1 * m + (1.0 - config_.beta1) * g[i];
        v = config_.beta2 * v + (1.0 - config_.beta2) * g[i] * g[i];
        next = p[i] - lr * (m / c1) / (std::sqrt(v / c2) + config_.epsilon);
      }
      if (!std::isfinite(next)) {
        throw nn::NumericError("optimizer: non-finite update for " + blocks[b].name + "[" + std::to_string(i) + "]");
      }
      p[i] = next;
    }
  }
}

}  // namespace uniscene::train
