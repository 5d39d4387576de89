// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "uniscene/nn/tensor.hpp"

namespace uniscene::nn {

/// Same-padded, stride-1 2D convolution.
/// x: (Cin, H, W), weight: (Cout, Cin, K, K), bias: (Cout) -> (Cout, H, W). K must be odd.
Tensor conv2d(const Tensor& x, const Tensor& weight, const Tensor& bias);

/// Same-padded, stride-1 3D convolution.
/// x: (Cin, D, H, W), weight: (Cout, Cin, K, K, K), bias: (Cout) -> (Cout, D, H, W).
Tensor conv3d(const Tensor& x, const Tensor& weight, const Tensor& bias);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);

/// Softmax along the leading axis (depth bins or classes), independently per
/// trailing position.
Tensor softmax_over_depth(const Tensor& x);

/// Same elements, new shape with equal element count.
Tensor reshape(const Tensor& x, Shape shape);

Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double factor);

/// Σ weights_i · x_i as a scalar. Used to reduce ops to scalars for gradient checks.
Tensor weighted_sum(const Tensor& x, std::span<const double> weights);

}  // namespace uniscene::nn
