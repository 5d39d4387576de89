// SPDX-License-Identifier: Apache-2.0
#include "uniscene/train/ablation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "uniscene/common/text.hpp"

namespace uniscene::train {

Experiment Experiment::with_seed(std::uint64_t seed) const {
  Experiment e = *this;
  e.pretrain.seed = seed;
  e.finetune.seed = seed;
  return e;
}

SampleCache::SampleCache(std::span<const synth::SequenceData> sequences, double held_out_fraction)
    : sequences_(sequences), split_(split_sequences(static_cast<int>(sequences.size()), held_out_fraction)) {}

const std::vector<Sample>& SampleCache::train(const VoxelGridSpec& grid, const LabelRecipe& pretext,
                                              const LabelRecipe& semantic) {
  return get(true, grid, pretext, semantic);
}

const std::vector<Sample>& SampleCache::held_out(const VoxelGridSpec& grid, const LabelRecipe& pretext,
                                                 const LabelRecipe& semantic) {
  return get(false, grid, pretext, semantic);
}

const std::vector<Sample>& SampleCache::get(bool train, const VoxelGridSpec& grid, const LabelRecipe& pretext,
                                            const LabelRecipe& semantic) {
  std::ostringstream key;
  key << train << '|' << format_real(grid.origin.x) << ',' << format_real(grid.origin.y) << ','
      << format_real(grid.origin.z);
  for (int i = 0; i < 3; ++i) key << ',' << format_real(grid.voxel_size[i]) << ',' << grid.dims[i];
  key << '|' << pretext.frames << to_string(pretext.mode) << '|' << semantic.frames << to_string(semantic.mode);
  auto it = cache_.find(key.str());
  if (it == cache_.end()) {
    const auto& idx = train ? split_.train : split_.held_out;
    it = cache_.emplace(key.str(), build_samples(sequences_, idx, grid, pretext, semantic)).first;
  }
  return it->second;
}

PipelineOutcome run_pipeline(SampleCache& samples, const Experiment& e, bool pretrained,
                             std::map<std::string, PretrainResult>* pretrain_cache) {
  if (!(e.pretrain.grid == e.finetune.grid) || !(e.pretrain.rig == e.finetune.rig) ||
      !(e.pretrain.frustum == e.finetune.frustum)) {
    throw std::invalid_argument("run_pipeline: pretrain and finetune must share grid, rig and frustum");
  }
  const auto& grid = e.finetune.grid;
  const auto& train_set = samples.train(grid, e.pretext_recipe(), e.semantic_recipe());
  const auto& held_out = samples.held_out(grid, e.pretext_recipe(), e.semantic_recipe());
  PipelineOutcome out;
  if (!pretrained) {
    out.finetune = finetune(nullptr, train_set, held_out, e.finetune);
    return out;
  }
  const std::string key = e.pretrain.canonical_text();
  if (pretrain_cache != nullptr) {
    auto it = pretrain_cache->find(key);
    if (it != pretrain_cache->end()) out.pretrain = it->second;
  }
  if (!out.pretrain) {
    out.pretrain = pretrain(train_set, e.pretrain);
    if (pretrain_cache != nullptr) pretrain_cache->emplace(key, *out.pretrain);
  }
  out.finetune = finetune(&out.pretrain->checkpoint, train_set, held_out, e.finetune);
  return out;
}

std::string_view to_string(AblationGrid grid) {
  switch (grid) {
    case AblationGrid::kFrames: return "frames";
    case AblationGrid::kFraction: return "fraction";
    case AblationGrid::kLoss: return "loss";
    case AblationGrid::kSupervision: return "supervision";
  }
  return "frames";
}

AblationGrid parse_ablation_grid(std::string_view text) {
  if (text == "frames") return AblationGrid::kFrames;
  if (text == "fraction") return AblationGrid::kFraction;
  if (text == "loss") return AblationGrid::kLoss;
  if (text == "supervision") return AblationGrid::kSupervision;
  throw std::invalid_argument("unknown ablation grid '" + std::string(text) + "'");
}

std::vector<GridPoint> grid_points(AblationGrid grid, const Experiment& base) {
  std::vector<GridPoint> points;
  switch (grid) {
    case AblationGrid::kFrames:
      for (int frames : {1, 3, 5}) {
        Experiment e = base;
        e.pretrain.num_fusion_frames = frames;
        points.push_back({std::to_string(frames), e});
      }
      break;
    case AblationGrid::kFraction:
      for (double f : {0.25, 0.5, 0.75, 1.0}) {
        Experiment e = base;
        e.finetune.label_fraction = f;
        points.push_back({format_real(f), e});
      }
      break;
    case AblationGrid::kLoss: {
      const std::pair<const char*, nn::FocalLossParams> variants[] = {
          {"paper", {2.0, 1.0, 0.25}}, {"standard", {0.25, 0.75, 2.0}}, {"bce", {1.0, 1.0, 0.0}}};
      for (const auto& [name, focal] : variants) {
        Experiment e = base;
        e.pretrain.focal = focal;
        points.push_back({name, e});
      }
      break;
    }
    case AblationGrid::kSupervision: {
      Experiment plain = base;
      plain.pretrain.dynamic_mode = DynamicMode::kKeepAll;
      Experiment supervised = base;
      supervised.pretrain.dynamic_mode = DynamicMode::kDropDynamic;
      points.push_back({"pretext-only", plain});
      points.push_back({"supervised", supervised});
      break;
    }
  }
  return points;
}

std::vector<AblationRow> run_ablation(AblationGrid grid, std::span<const synth::SequenceData> sequences,
                                      const Experiment& base, std::vector<std::uint64_t> seeds) {
  if (seeds.empty()) throw std::invalid_argument("ablate: at least one seed is required");
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  SampleCache samples(sequences, base.held_out_fraction);
  std::map<std::string, PretrainResult> pretrain_cache;
  std::vector<AblationRow> rows;
  for (const auto& point : grid_points(grid, base)) {
    AblationRow mean_row;
    mean_row.grid = to_string(grid);
    mean_row.point = point.label;
    mean_row.seed = "mean";
    for (auto seed : seeds) {
      const auto outcome = run_pipeline(samples, point.experiment.with_seed(seed), true, &pretrain_cache);
      const auto& report = outcome.finetune.report;
      AblationRow row = mean_row;
      row.seed = std::to_string(seed);
      row.binary_iou = report.binary_iou;
      row.per_class_iou = report.per_class_iou;
      row.miou = report.miou;
      row.pretrain_final_loss = outcome.pretrain->loss_curve.back();
      row.finetune_final_loss = report.loss_curve.back();
      rows.push_back(row);

      const double w = 1.0 / static_cast<double>(seeds.size());
      mean_row.per_class_iou.resize(row.per_class_iou.size(), 0.0);
      mean_row.binary_iou += w * row.binary_iou;
      for (std::size_t c = 0; c < row.per_class_iou.size(); ++c) mean_row.per_class_iou[c] += w * row.per_class_iou[c];
      mean_row.miou += w * row.miou;
      mean_row.pretrain_final_loss += w * row.pretrain_final_loss;
      mean_row.finetune_final_loss += w * row.finetune_final_loss;
    }
    rows.push_back(mean_row);
  }
  return rows;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
  std::size_t classes = 0;
  for (const auto& r : rows) classes = std::max(classes, r.per_class_iou.size());
  std::ostringstream out;
  out << "grid,point,seed,binary_iou";
  for (std::size_t c = 0; c < classes; ++c) out << ",class_" << c + 1 << "_iou";
  out << ",miou,pretrain_final_loss,finetune_final_loss\n";
  for (const auto& r : rows) {
    out << r.grid << ',' << r.point << ',' << r.seed << ',' << format_real(r.binary_iou);
    for (std::size_t c = 0; c < classes; ++c) {
      out << ',' << (c < r.per_class_iou.size() ? format_real(r.per_class_iou[c]) : std::string());
    }
    out << ',' << format_real(r.miou) << ',' << format_real(r.pretrain_final_loss) << ','
        << format_real(r.finetune_final_loss) << '\n';
  }
  return out.str();
}

}  // namespace uniscene::train
