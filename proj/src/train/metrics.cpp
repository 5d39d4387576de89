// SPDX-License-Identifier: Apache-2.0
#include "uniscene/train/metrics.hpp"

#include <sstream>
#include <stdexcept>

#include "uniscene/common/text.hpp"

namespace uniscene::train {

double Confusion::iou() const {
  const std::uint64_t uni = tp + fp + fn;
  return uni == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(uni);
}

void Confusion::add(bool predicted, bool actual) {
  if (predicted && actual) {
    ++tp;
  } else if (predicted) {
    ++fp;
  } else if (actual) {
    ++fn;
  }
}

IouAccumulator::IouAccumulator(int num_classes) : classes_(static_cast<std::size_t>(num_classes)) {
  if (num_classes < 2) throw std::invalid_argument("IouAccumulator: need at least two classes");
}

void IouAccumulator::add_binary(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> actual) {
  if (predicted.size() != actual.size()) throw std::invalid_argument("add_binary: size mismatch");
  for (std::size_t i = 0; i < predicted.size(); ++i) binary_.add(predicted[i] != 0, actual[i] != 0);
}

void IouAccumulator::add_semantic(std::span<const ClassId> predicted, std::span<const ClassId> actual) {
  if (predicted.size() != actual.size()) throw std::invalid_argument("add_semantic: size mismatch");
  semantic_seen_ = true;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] >= classes_.size() || actual[i] >= classes_.size()) {
      throw std::invalid_argument("add_semantic: class id out of range");
    }
    binary_.add(predicted[i] != kFree, actual[i] != kFree);
    for (std::size_t c = 1; c < classes_.size(); ++c) classes_[c].add(predicted[i] == c, actual[i] == c);
  }
}

std::vector<double> IouAccumulator::per_class_iou() const {
  std::vector<double> out;
  for (std::size_t c = 1; c < classes_.size(); ++c) out.push_back(classes_[c].iou());
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

std::vector<std::uint8_t> threshold(std::span<const double> probs) {
  std::vector<std::uint8_t> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] > 0.5 ? 1 : 0;
  return out;
}

std::vector<ClassId> argmax_classes(std::span<const double> logits, int num_classes) {
  const auto k = static_cast<std::size_t>(num_classes);
  if (k == 0 || logits.size() % k != 0) throw std::invalid_argument("argmax_classes: bad logit count");
  const std::size_t cells = logits.size() / k;
  std::vector<ClassId> out(cells, 0);
  for (std::size_t i = 0; i < cells; ++i) {
    double best = logits[i];
    for (std::size_t c = 1; c < k; ++c) {
      if (logits[c * cells + i] > best) {
        best = logits[c * cells + i];
        out[i] = static_cast<ClassId>(c);
      }
    }
  }
  return out;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "samples = " << samples << '\n';
  out << "binary_iou = " << format_real(binary_iou) << '\n';
  for (std::size_t c = 0; c < per_class_iou.size(); ++c) {
    out << "class_" << c + 1 << "_iou = " << format_real(per_class_iou[c]) << '\n';
  }
  if (!per_class_iou.empty()) out << "miou = " << format_real(miou) << '\n';
  for (std::size_t e = 0; e < loss_curve.size(); ++e) {
    out << "loss_epoch_" << e + 1 << " = " << format_real(loss_curve[e]) << '\n';
  }
  return out.str();
}

}  // namespace uniscene::train
