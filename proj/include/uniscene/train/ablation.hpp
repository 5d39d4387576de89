// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uniscene/synth/sequence.hpp"
#include "uniscene/train/trainer.hpp"

namespace uniscene::train {

/// The two training stages of one experiment. The pretext labels follow
/// `pretrain.num_fusion_frames` / `pretrain.dynamic_mode`, the semantic labels
/// follow the same fields of `finetune`.
struct Experiment {
  TrainConfig pretrain;
  TrainConfig finetune = default_finetune_config();
  double held_out_fraction = 0.2;

  LabelRecipe pretext_recipe() const { return {pretrain.num_fusion_frames, pretrain.dynamic_mode}; }
  LabelRecipe semantic_recipe() const { return {finetune.num_fusion_frames, finetune.dynamic_mode}; }
  /// Sets the training seed of both stages.
  Experiment with_seed(std::uint64_t seed) const;
};

/// Train/held-out samples built once per label recipe pair and reused.
class SampleCache {
 public:
  explicit SampleCache(std::span<const synth::SequenceData> sequences, double held_out_fraction = 0.2);

  const std::vector<Sample>& train(const VoxelGridSpec& grid, const LabelRecipe& pretext, const LabelRecipe& semantic);
  const std::vector<Sample>& held_out(const VoxelGridSpec& grid, const LabelRecipe& pretext,
                                      const LabelRecipe& semantic);

 private:
  const std::vector<Sample>& get(bool train, const VoxelGridSpec& grid, const LabelRecipe& pretext,
                                 const LabelRecipe& semantic);

  std::span<const synth::SequenceData> sequences_;
  Split split_;
  std::map<std::string, std::vector<Sample>> cache_;
};

struct PipelineOutcome {
  std::optional<PretrainResult> pretrain;  // empty for scratch runs
  FinetuneResult finetune;
};

/// pretrain -> strip -> finetune -> evaluate, or scratch finetune -> evaluate.
/// Pretrain results are memoised in `pretrain_cache` by config text when given.
PipelineOutcome run_pipeline(SampleCache& samples, const Experiment& experiment, bool pretrained,
                             std::map<std::string, PretrainResult>* pretrain_cache = nullptr);

enum class AblationGrid { kFrames, kFraction, kLoss, kSupervision };

std::string_view to_string(AblationGrid grid);
AblationGrid parse_ablation_grid(std::string_view text);

struct GridPoint {
  std::string label;
  Experiment experiment;
};

/// frames: pretext fusion 1/3/5. fraction: label_fraction 0.25/0.5/0.75/1.
/// loss: focal (alpha_pos, alpha_neg, gamma) = (2, 1, 0.25), (0.25, 0.75, 2),
/// (1, 1, 0). supervision: pretext labels keep_all vs drop_dynamic.
std::vector<GridPoint> grid_points(AblationGrid grid, const Experiment& base);

struct AblationRow {
  std::string grid;
  std::string point;
  std::string seed;  // a seed value or "mean"
  double binary_iou = 0.0;
  std::vector<double> per_class_iou;
  double miou = 0.0;
  double pretrain_final_loss = 0.0;
  double finetune_final_loss = 0.0;
};

/// Per grid point: one row per seed in ascending seed order, then a mean row.
std::vector<AblationRow> run_ablation(AblationGrid grid, std::span<const synth::SequenceData> sequences,
                                      const Experiment& base, std::vector<std::uint64_t> seeds);

std::string ablation_csv(std::span<const AblationRow> rows);

}  // namespace uniscene::train
