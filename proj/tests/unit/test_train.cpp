// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "uniscene/train/ablation.hpp"
#include "uniscene/train/optimizer.hpp"

using namespace uniscene;
using namespace uniscene::train;

namespace {

// Four short sequences: three for training and one held out.
struct SmallBench {
  std::vector<synth::SequenceData> sequences;
  std::vector<Sample> train;
  std::vector<Sample> held_out;

  SmallBench() {
    synth::BenchmarkConfig bc;
    bc.seed = 5;
    bc.num_sequences = 4;
    bc.rig = view::RigConfig{}.build();
    sequences = synth::generate_benchmark(bc);
    for (auto& s : sequences) synth::quantize_for_storage(s);
    const auto split = split_sequences(4);
    const TrainConfig tc;
    const LabelRecipe sem{5, DynamicMode::kDropDynamic};
    train = build_samples(sequences, split.train, tc.grid, {3, DynamicMode::kKeepAll}, sem);
    held_out = build_samples(sequences, split.held_out, tc.grid, {3, DynamicMode::kKeepAll}, sem);
  }
};

const SmallBench& bench() {
  static const SmallBench b;
  return b;
}

TrainConfig quick(int epochs) {
  TrainConfig c;
  c.epochs = epochs;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("iou counting") {
  Confusion toy;
  toy.add(true, true);
  toy.add(true, false);
  toy.add(false, true);
  toy.add(false, false);
  CHECK(toy.iou() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(Confusion{}.iou() == 1.0);

  IouAccumulator perfect(4);
  const std::vector<ClassId> truth{0, 1, 2, 3, 3, 1};
  perfect.add_semantic(truth, truth);
  CHECK(perfect.binary_iou() == 1.0);
  for (double v : perfect.per_class_iou()) CHECK(v == 1.0);

  IouAccumulator empty(4);
  const std::vector<std::uint8_t> actual{0, 1, 1, 0}, none{0, 0, 0, 0};
  empty.add_binary(none, actual);
  CHECK(empty.binary_iou() == 0.0);
  CHECK_FALSE(empty.has_semantic());

  IouAccumulator mixed(4);
  mixed.add_semantic(std::vector<ClassId>{1, 2, 0, 3}, std::vector<ClassId>{1, 3, 2, 0});
  const auto per = mixed.per_class_iou();
  CHECK(per[0] == 1.0);
  CHECK(per[1] == 0.0);
  CHECK(per[2] == 0.0);
  CHECK(mixed.binary_iou() == doctest::Approx(2.0 / 4.0));
}

TEST_CASE("prediction rules") {
  const std::vector<double> probs{0.2, 0.5, 0.5000001, 0.9};
  CHECK(threshold(probs) == std::vector<std::uint8_t>{0, 0, 1, 1});
  // Two cells, three classes, channel-major.
  const std::vector<double> logits{1.0, 0.0, 2.0, 5.0, 2.0, 5.0};
  CHECK(argmax_classes(logits, 3) == std::vector<ClassId>{1, 1});
  const std::vector<double> xs{0.2, 0.4, 0.9};
  CHECK(mean(xs) == doctest::Approx(0.5));
}

TEST_CASE("report text") {
  EvalReport r;
  r.samples = 3;
  r.binary_iou = 0.5;
  r.per_class_iou = {0.25, 0.5, 0.75};
  r.miou = 0.5;
  r.loss_curve = {1.0, 0.5};
  CHECK(r.to_text() ==
        "samples = 3\nbinary_iou = 0.5\nclass_1_iou = 0.25\nclass_2_iou = 0.5\nclass_3_iou = 0.75\nmiou = 0.5\n"
        "loss_epoch_1 = 1\nloss_epoch_2 = 0.5\n");
}

TEST_CASE("optimizer steps") {
  nn::ModelParams p;
  p.add("w", {1}, {1.0});
  OptimizerConfig sgd{OptimizerKind::kSgd, 0.1};
  Optimizer s(sgd, p);
  s.step(p, {{1.0}});
  CHECK(p.get("w").values[0] == doctest::Approx(0.9).epsilon(1e-15));

  nn::ModelParams a;
  a.add("w", {2}, {0.0, 0.5});
  Optimizer adam(OptimizerConfig{}, a);
  adam.step(a, {{1.0, 0.0}});
  // m = 0.1, v = 0.001; bias-corrected both are 1 and 1, so the step is lr / (1 + eps).
  CHECK(a.get("w").values[0] == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
  CHECK(a.get("w").values[1] == 0.5);
  CHECK(adam.steps() == 1);

  nn::ModelParams bad;
  bad.add("w", {1}, {0.0});
  Optimizer s2(sgd, bad);
  CHECK_THROWS_AS(s2.step(bad, {{std::nan("")}}), nn::NumericError);
}

TEST_CASE("splits and label subsets") {
  const auto split = split_sequences(40);
  CHECK(split.train.size() == 32);
  CHECK(split.held_out.front() == 32);
  CHECK(split.held_out.back() == 39);
  CHECK(split_sequences(7).held_out.size() == 2);

  const auto q = label_subset(40, 0.25, 9), h = label_subset(40, 0.5, 9), t = label_subset(40, 0.75, 9);
  const auto all = label_subset(40, 1.0, 9);
  CHECK(q.size() == 10);
  CHECK(h.size() == 20);
  CHECK(t.size() == 30);
  CHECK(all.size() == 40);
  CHECK(std::includes(h.begin(), h.end(), q.begin(), q.end()));
  CHECK(std::includes(t.begin(), t.end(), h.begin(), h.end()));
  CHECK(label_subset(40, 0.25, 10) != q);
  CHECK(label_subset(7, 0.25, 1).size() == 2);
  CHECK_THROWS_AS(label_subset(5, 0.0, 1), std::invalid_argument);
}

TEST_CASE("config canonical text round-trips") {
  TrainConfig c = quick(7);
  c.optimizer.kind = OptimizerKind::kSgd;
  c.label_fraction = 0.75;
  c.dynamic_mode = DynamicMode::kCompensate;
  c.class_weights = {0.5, 1, 2, 3};
  const auto parsed = parse_train_config(c.canonical_text());
  CHECK(parsed == c);
  CHECK(parsed.hash() == c.hash());
  CHECK(c.hash() != quick(8).hash());
  CHECK_THROWS(parse_train_config(c.canonical_text() + "train.bogus = 1\n"));
  std::string missing = c.canonical_text();
  missing.erase(0, missing.find('\n') + 1);
  CHECK_THROWS(parse_train_config(missing));
  TrainConfig bad = c;
  bad.label_fraction = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("checkpoints round-trip and strip cleanly") {
  const TrainConfig c = quick(1);
  Checkpoint ck{quantize_params(nn::init_params(c.model_config(), nn::Heads::kOccupancy, 1)),
                {Stage::kPretrained, 24, "none", c.hash(), c.canonical_text()}};
  const Bytes bytes = serialize_checkpoint(ck);
  const Checkpoint back = parse_checkpoint(bytes);
  CHECK(back.provenance == ck.provenance);
  CHECK(serialize_checkpoint(back) == bytes);
  CHECK(digest(back) == digest(ck));

  const Checkpoint stripped = strip_decoder(ck);
  CHECK_FALSE(stripped.params.has_prefix(nn::kOccupancyDecoderPrefix));
  CHECK_FALSE(stripped.params.has_prefix(nn::kSemanticHeadPrefix));
  for (const auto& b : stripped.params.blocks()) {
    CHECK(nn::is_encoder_param(b.name));
    CHECK(b.values == ck.params.get(b.name).values);
  }
  CHECK(serialize_checkpoint(strip_decoder(stripped)) == serialize_checkpoint(stripped));

  Bytes truncated(bytes.begin(), bytes.end() - 3);
  CHECK_THROWS_AS(parse_checkpoint(truncated), FormatError);
}

TEST_CASE("pretraining descends and is reproducible") {
  const auto& b = bench();
  TrainConfig c = quick(1);
  c.batch = 1;
  const std::span<const Sample> one(b.train.data(), 1);
  const auto before = nn::init_params(c.model_config(), nn::Heads::kOccupancy, derive_seed(c.seed, "init"));
  const double loss0 = dataset_loss(before, one, c);
  const auto r = pretrain(one, c);
  CHECK(dataset_loss(r.checkpoint.params, one, c) < loss0);
  CHECK(r.checkpoint.provenance.stage == Stage::kPretrained);
  CHECK(r.checkpoint.provenance.config_hash == c.hash());

  TrainConfig three = quick(2);
  const auto x = pretrain(b.train, three);
  const auto y = pretrain(b.train, three);
  CHECK(serialize_checkpoint(x.checkpoint) == serialize_checkpoint(y.checkpoint));
  CHECK(x.loss_curve == y.loss_curve);
  for (int frames : {1, 5}) {
    three.num_fusion_frames = frames;
    CHECK_NOTHROW(three.validate());
  }
}

TEST_CASE("training loss mostly decreases") {
  const auto& b = bench();
  const auto r = pretrain(b.train, quick(10));
  int rises = 0;
  for (std::size_t e = 1; e < r.loss_curve.size(); ++e) rises += r.loss_curve[e] > r.loss_curve[e - 1];
  CHECK(rises <= 1);
}

TEST_CASE("fine-tuning provenance and evaluation") {
  const auto& b = bench();
  const auto pre = pretrain(b.train, quick(1));
  TrainConfig fc = default_finetune_config();
  fc.epochs = 1;
  const auto warm = finetune(&pre.checkpoint, b.train, b.held_out, fc);
  CHECK(warm.checkpoint.provenance.stage == Stage::kFinetuned);
  CHECK(warm.checkpoint.provenance.parent == digest(pre.checkpoint));
  CHECK(warm.checkpoint.params.has_prefix(nn::kSemanticHeadPrefix));
  CHECK_FALSE(warm.checkpoint.params.has_prefix(nn::kOccupancyDecoderPrefix));
  CHECK(warm.report.per_class_iou.size() == 3);
  CHECK(warm.report.miou == doctest::Approx(mean(warm.report.per_class_iou)));
  CHECK(warm.report.loss_curve.size() == 1);
  CHECK(warm.report.samples == b.held_out.size());

  const auto scratch = finetune(nullptr, b.train, b.held_out, fc);
  CHECK(scratch.checkpoint.provenance.stage == Stage::kScratch);
  CHECK(scratch.checkpoint.provenance.parent == "none");

  const auto again = evaluate(warm.checkpoint, b.held_out, fc);
  CHECK(again.miou == warm.report.miou);

  const auto occ = evaluate(pre.checkpoint, b.held_out, quick(1));
  CHECK(occ.per_class_iou.empty());
  CHECK(occ.binary_iou >= 0.0);
  CHECK_THROWS(evaluate(warm.checkpoint, std::span<const Sample>{}, fc));
  CHECK_THROWS(evaluate(strip_decoder(pre.checkpoint), b.held_out, fc));
}

TEST_CASE("ablation harness arithmetic") {
  const auto& b = bench();
  Experiment base;
  base.pretrain = quick(1);
  base.finetune.epochs = 1;
  base.held_out_fraction = 0.25;

  const auto frames = grid_points(AblationGrid::kFrames, base);
  REQUIRE(frames.size() == 3);
  CHECK(frames[0].experiment.pretrain.num_fusion_frames == 1);
  CHECK(frames[2].experiment.pretrain.num_fusion_frames == 5);
  const auto sup = grid_points(AblationGrid::kSupervision, base);
  REQUIRE(sup.size() == 2);
  CHECK(sup[0].experiment.pretrain.dynamic_mode == DynamicMode::kKeepAll);
  CHECK(sup[1].experiment.pretrain.dynamic_mode == DynamicMode::kDropDynamic);
  CHECK(grid_points(AblationGrid::kLoss, base)[1].experiment.pretrain.focal.gamma == 2.0);
  CHECK_THROWS(parse_ablation_grid("bogus"));

  const auto rows = run_ablation(AblationGrid::kFraction, b.sequences, base, {3, 1, 2, 1});
  REQUIRE(rows.size() == 16);
  CHECK(rows[0].seed == "1");
  CHECK(rows[2].seed == "3");
  CHECK(rows[3].seed == "mean");
  CHECK(rows[3].miou == doctest::Approx((rows[0].miou + rows[1].miou + rows[2].miou) / 3.0));
  const std::string csv = ablation_csv(rows);
  CHECK(csv.rfind("grid,point,seed,binary_iou,class_1_iou,class_2_iou,class_3_iou,miou,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}
