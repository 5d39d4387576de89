// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "uniscene/nn/model.hpp"
#include "uniscene/nn/tensor.hpp"

namespace uniscene::nn {

struct GradInput {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct GradCheckOptions {
  double step = 1e-5;
  // Relative error is |a - n| / max(|a|, |n|, floor); the floor keeps
  // near-zero gradients from turning rounding noise into large ratios.
  double denominator_floor = 1e-4;
  // 0 checks every entry; otherwise this many entries drawn across all inputs.
  std::size_t sample_count = 0;
  std::uint64_t sample_seed = 0;
};

struct BlockReport {
  std::string name;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradCheckReport {
  std::vector<BlockReport> blocks;

  double max_rel_error() const;
  bool passed(double tolerance) const { return max_rel_error() < tolerance; }
};

/// Builds a scalar from tensors shaped like the inputs, in input order.
using ScalarFn = std::function<Tensor(std::span<const Tensor>)>;

/// Compares reverse-mode gradients against central differences.
GradCheckReport grad_check(const ScalarFn& f, const std::vector<GradInput>& inputs,
                           const GradCheckOptions& options = {});

/// Same, over every block of a model's parameters.
GradCheckReport grad_check_model(const ModelParams& params, const std::function<Tensor(const BoundParams&)>& loss,
                                 const GradCheckOptions& options = {});

}  // namespace uniscene::nn
