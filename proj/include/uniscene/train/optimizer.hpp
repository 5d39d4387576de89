// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uniscene/nn/model.hpp"
#include "uniscene/train/config.hpp"

namespace uniscene::train {

/// SGD (p -= lr * g) or Adam with bias-corrected moments.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const nn::ModelParams& layout);

  /// grads holds one vector per parameter block, in block order. Throws
  /// nn::NumericError if any updated value is non-finite.
  void step(nn::ModelParams& params, const std::vector<std::vector<double>>& grads);

  long steps() const { return t_; }

 private:
  OptimizerConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long t_ = 0;
};

}  // namespace uniscene::train
