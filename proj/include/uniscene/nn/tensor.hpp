// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uniscene::nn {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

/// Raised when an operation produces NaN or Inf.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on incompatible operand shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense float64 tensor with reverse-mode differentiation.
///
/// A Tensor is a shared handle onto a graph node. Leaves are created with
/// constant() or parameter(); operations create interior nodes through
/// from_op(), which records the inputs and a backward closure when any input
/// requires a gradient. backward() on a scalar visits every reachable node
/// once in reverse topological order, accumulating into leaf gradients.
class Tensor {
 public:
  /// Receives the output gradient and one slot per input; a slot is null when
  /// that input does not require a gradient. Implementations accumulate (+=).
  using BackwardFn =
      std::function<void(std::span<const double> out_grad, std::span<std::vector<double>* const> in_grads)>;

  Tensor() = default;

  static Tensor constant(Shape shape, std::vector<double> values);
  static Tensor parameter(Shape shape, std::vector<double> values);
  static Tensor from_op(std::string_view op, Shape shape, std::vector<double> values, std::vector<Tensor> inputs,
                        BackwardFn backward);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const;
  std::size_t numel() const;
  std::span<const double> values() const;
  /// Value of a one-element tensor.
  double item() const;

  bool requires_grad() const;
  /// Accumulated gradient, or an empty span when none has been produced.
  std::span<const double> grad() const;
  void zero_grad() const;

  /// Seeds d(this)/d(this) = 1 and propagates. Requires a one-element tensor.
  /// Interior gradients are reset first; leaf gradients accumulate.
  void backward() const;

 private:
  struct Node;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  std::shared_ptr<Node> node_;
};

}  // namespace uniscene::nn
