// SPDX-License-Identifier: Apache-2.0
#include "uniscene/train/trainer.hpp"

#include <stdexcept>
#include <string>

#include "uniscene/common/rng.hpp"
#include "uniscene/nn/losses.hpp"
#include "uniscene/train/optimizer.hpp"

namespace uniscene::train {

namespace {

using nn::Heads;

Heads heads_of(const nn::ModelParams& params) {
  if (params.has_prefix(nn::kSemanticHeadPrefix)) return Heads::kSemantic;
  if (params.has_prefix(nn::kOccupancyDecoderPrefix)) return Heads::kOccupancy;
  throw std::invalid_argument("checkpoint has no decoder head to evaluate");
}

// Loss of one batch; builds the graph over `params`.
nn::Tensor batch_loss(Heads heads, const nn::BoundParams& bound, std::span<const Sample* const> batch,
                      const TrainConfig& config, const nn::ForwardGeometry& geometry) {
  const auto mc = config.model_config();
  std::vector<nn::Tensor> outputs;
  outputs.reserve(batch.size());
  if (heads == Heads::kOccupancy) {
    std::vector<OccupancyGrid> targets;
    for (const Sample* s : batch) {
      outputs.push_back(nn::forward_occupancy(s->images, bound, mc, geometry));
      targets.push_back(s->occupancy);
    }
    return nn::focal_loss(outputs, targets, config.focal);
  }
  std::vector<SemanticGrid> targets;
  for (const Sample* s : batch) {
    outputs.push_back(nn::forward_semantic(s->images, bound, mc, geometry));
    targets.push_back(s->semantic);
  }
  return nn::semantic_loss(outputs, targets, config.class_weights);
}

// Runs the epoch loop in place; returns the per-epoch mean batch loss.
std::vector<double> fit(nn::ModelParams& params, Heads heads, std::span<const Sample* const> samples,
                        const TrainConfig& config, const char* stage) {
  if (samples.empty()) throw std::invalid_argument(std::string(stage) + ": dataset is empty");
  const nn::ForwardGeometry geometry(config.rig.build(), config.frustum, config.grid);
  Optimizer optimizer(config.optimizer, params);
  std::vector<double> curve;
  const auto batch_size = static_cast<std::size_t>(config.batch);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.seed, std::string(stage) + "/shuffle/" + std::to_string(epoch)));
    const auto order = rng.permutation(samples.size());
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      std::vector<const Sample*> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + batch_size); ++i) {
        batch.push_back(samples[order[i]]);
      }
      try {
        const nn::BoundParams bound(params, true);
        const nn::Tensor loss = batch_loss(heads, bound, batch, config, geometry);
        loss.backward();
        optimizer.step(params, bound.gradients(params));
        total += loss.item();
      } catch (const nn::NumericError& e) {
        throw TrainingDiverged(std::string(stage) + " diverged at epoch " + std::to_string(epoch + 1) + ", batch " +
                               std::to_string(batches + 1) + ": " + e.what());
      }
      ++batches;
    }
    curve.push_back(total / static_cast<double>(batches));
  }
  return curve;
}

std::vector<const Sample*> pointers(std::span<const Sample> samples, std::span<const std::size_t> subset) {
  std::vector<const Sample*> out;
  out.reserve(subset.size());
  for (auto i : subset) out.push_back(&samples[i]);
  return out;
}

Provenance make_provenance(Stage stage, const TrainConfig& config, std::string parent) {
  return {stage, config.epochs, std::move(parent), config.hash(), config.canonical_text()};
}

}  // namespace

PretrainResult pretrain(std::span<const Sample> samples, const TrainConfig& config) {
  config.validate();
  auto params = nn::init_params(config.model_config(), Heads::kOccupancy, derive_seed(config.seed, "init"));
  const auto subset = label_subset(samples.size(), config.label_fraction, config.seed);
  const auto chosen = pointers(samples, subset);
  PretrainResult result;
  result.loss_curve = fit(params, Heads::kOccupancy, chosen, config, "pretrain");
  result.checkpoint.params = quantize_params(std::move(params));
  result.checkpoint.provenance = make_provenance(Stage::kPretrained, config, "none");
  return result;
}

FinetuneResult finetune(const Checkpoint* init, std::span<const Sample> train_samples,
                        std::span<const Sample> held_out, const TrainConfig& config) {
  config.validate();
  auto params = nn::init_params(config.model_config(), Heads::kSemantic, derive_seed(config.seed, "init"));
  std::string parent = "none";
  if (init != nullptr) {
    const Checkpoint encoder = strip_decoder(*init);
    if (encoder.params.blocks().empty()) throw std::invalid_argument("finetune: init checkpoint has no encoder");
    for (const auto& b : encoder.params.blocks()) {
      if (!params.contains(b.name)) throw std::invalid_argument("finetune: unexpected parameter " + b.name);
      auto& dst = params.get(b.name);
      if (dst.shape != b.shape) throw nn::ShapeError("finetune: shape mismatch for " + b.name);
      dst.values = b.values;
    }
    parent = digest(*init);
  }
  const auto subset = label_subset(train_samples.size(), config.label_fraction, config.seed);
  const auto chosen = pointers(train_samples, subset);

  FinetuneResult result;
  const auto curve = fit(params, Heads::kSemantic, chosen, config, "finetune");
  result.checkpoint.params = quantize_params(std::move(params));
  result.checkpoint.provenance =
      make_provenance(init != nullptr ? Stage::kFinetuned : Stage::kScratch, config, std::move(parent));
  result.report = evaluate(result.checkpoint, held_out, config);
  result.report.loss_curve = curve;
  return result;
}

EvalReport evaluate(const Checkpoint& ck, std::span<const Sample> samples, const TrainConfig& config) {
  if (samples.empty()) throw std::invalid_argument("evaluate: dataset is empty");
  const Heads heads = heads_of(ck.params);
  const auto mc = config.model_config();
  const nn::ForwardGeometry geometry(config.rig.build(), config.frustum, config.grid);
  const nn::BoundParams bound(ck.params, false);
  IouAccumulator acc(config.num_classes);
  for (const auto& s : samples) {
    if (heads == Heads::kOccupancy) {
      const auto probs = nn::forward_occupancy(s.images, bound, mc, geometry);
      acc.add_binary(threshold(probs.values()), s.occupancy.data);
    } else {
      const auto logits = nn::forward_semantic(s.images, bound, mc, geometry);
      acc.add_semantic(argmax_classes(logits.values(), config.num_classes), s.semantic.data);
    }
  }
  EvalReport report;
  report.samples = samples.size();
  report.binary_iou = acc.binary_iou();
  if (acc.has_semantic()) {
    report.per_class_iou = acc.per_class_iou();
    report.miou = mean(report.per_class_iou);
  }
  return report;
}

double dataset_loss(const nn::ModelParams& params, std::span<const Sample> samples, const TrainConfig& config) {
  if (samples.empty()) throw std::invalid_argument("dataset_loss: dataset is empty");
  const Heads heads = heads_of(params);
  const nn::ForwardGeometry geometry(config.rig.build(), config.frustum, config.grid);
  const nn::BoundParams bound(params, false);
  std::vector<const Sample*> all;
  for (const auto& s : samples) all.push_back(&s);
  return batch_loss(heads, bound, all, config, geometry).item();
}

}  // namespace uniscene::train
