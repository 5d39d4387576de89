// SPDX-License-Identifier: Apache-2.0
#include "uniscene/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "uniscene/common/rng.hpp"

namespace uniscene::nn {

double GradCheckReport::max_rel_error() const {
  double worst = 0.0;
  for (const auto& b : blocks) worst = std::max(worst, b.max_rel_error);
  return worst;
}

namespace {

double evaluate(const ScalarFn& f, const std::vector<GradInput>& inputs, std::size_t block, std::size_t index,
                double value) {
  std::vector<Tensor> tensors;
  tensors.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i == block) {
      auto v = inputs[i].values;
      v[index] = value;
      tensors.push_back(Tensor::constant(inputs[i].shape, std::move(v)));
    } else {
      tensors.push_back(Tensor::constant(inputs[i].shape, inputs[i].values));
    }
  }
  return f(tensors).item();
}

}  // namespace

GradCheckReport grad_check(const ScalarFn& f, const std::vector<GradInput>& inputs, const GradCheckOptions& options) {
  std::vector<Tensor> leaves;
  leaves.reserve(inputs.size());
  for (const auto& in : inputs) leaves.push_back(Tensor::parameter(in.shape, in.values));
  f(leaves).backward();

  // (block, index) pairs to probe.
  std::vector<std::pair<std::size_t, std::size_t>> probes;
  std::size_t total = 0;
  for (const auto& in : inputs) total += in.values.size();
  if (options.sample_count == 0 || options.sample_count >= total) {
    for (std::size_t b = 0; b < inputs.size(); ++b) {
      for (std::size_t i = 0; i < inputs[b].values.size(); ++i) probes.emplace_back(b, i);
    }
  } else {
    Rng rng(options.sample_seed);
    auto order = rng.permutation(total);
    order.resize(options.sample_count);
    std::sort(order.begin(), order.end());
    std::size_t b = 0, offset = 0;
    for (std::size_t flat : order) {
      while (flat >= offset + inputs[b].values.size()) offset += inputs[b++].values.size();
      probes.emplace_back(b, flat - offset);
    }
  }

  GradCheckReport report;
  for (const auto& in : inputs) report.blocks.push_back({in.name, 0, 0.0, 0.0});
  for (const auto& [b, i] : probes) {
    const double x = inputs[b].values[i];
    const double numeric =
        (evaluate(f, inputs, b, i, x + options.step) - evaluate(f, inputs, b, i, x - options.step)) /
        (2.0 * options.step);
    const auto g = leaves[b].grad();
    const double analytic = g.empty() ? 0.0 : g[i];
    const double abs_err = std::abs(analytic - numeric);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), options.denominator_floor});
    auto& r = report.blocks[b];
    ++r.checked;
    r.max_abs_error = std::max(r.max_abs_error, abs_err);
    r.max_rel_error = std::max(r.max_rel_error, abs_err / denom);
  }
  return report;
}

GradCheckReport grad_check_model(const ModelParams& params, const std::function<Tensor(const BoundParams&)>& loss,
                                 const GradCheckOptions& options) {
  std::vector<GradInput> inputs;
  for (const auto& b : params.blocks()) inputs.push_back({b.name, b.shape, b.values});
  return grad_check(
      [&](std::span<const Tensor> tensors) { return loss(BoundParams(params, tensors)); }, inputs, options);
}

}  // namespace uniscene::nn
