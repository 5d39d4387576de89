// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uniscene/occ/voxel_grid.hpp"

namespace uniscene::train {

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  /// TP / (TP + FP + FN); an empty union counts as perfect agreement.
  double iou() const;
  void add(bool predicted, bool actual);
};

/// Accumulates confusion counts over a whole evaluation set.
class IouAccumulator {
 public:
  explicit IouAccumulator(int num_classes);

  /// Binary prediction against binary truth.
  void add_binary(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> actual);
  /// Class ids against class ids; also feeds the binary counts (non-free).
  void add_semantic(std::span<const ClassId> predicted, std::span<const ClassId> actual);

  double binary_iou() const { return binary_.iou(); }
  /// IoU of classes 1..K-1.
  std::vector<double> per_class_iou() const;
  bool has_semantic() const { return semantic_seen_; }

 private:
  Confusion binary_;
  std::vector<Confusion> classes_;
  bool semantic_seen_ = false;
};

struct EvalReport {
  double binary_iou = 0.0;
  std::vector<double> per_class_iou;  // classes 1..K-1; empty for occupancy-only models
  double miou = 0.0;                  // mean of per_class_iou
  std::vector<double> loss_curve;     // mean training loss per epoch
  std::size_t samples = 0;

  /// Plain `key = value` text, numbers in %.17g.
  std::string to_text() const;
};

double mean(std::span<const double> values);

/// Binary prediction: p > 0.5.
std::vector<std::uint8_t> threshold(std::span<const double> probs);
/// Class with the largest logit per voxel, ties to the smaller id. logits is
/// (K, cells) channel-major.
std::vector<ClassId> argmax_classes(std::span<const double> logits, int num_classes);

}  // namespace uniscene::train
