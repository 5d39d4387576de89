// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <fstream>
#include <sstream>

#include "cli_fixture.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "uniscene/cli/dataset_store.hpp"
#include "uniscene/io/formats.hpp"
#include "uniscene/occ/voxelize.hpp"

using namespace uniscene;
using namespace uniscene::cli;
using cli_fixture::run;
namespace fs = std::filesystem;

namespace {

struct TinyDataset {
  fs::path root = cli_fixture::scratch_dir("cli");
  fs::path config = root / "tiny.cfg";
  fs::path data = root / "data";

  TinyDataset() {
    write_file_atomic(config, std::string_view(cli_fixture::kTinyConfig));
    REQUIRE(run({"synth", "--config", config.string(), "--out", data.string()}) == 0);
  }
  ~TinyDataset() { fs::remove_all(root); }
};

TinyDataset& tiny() {
  static TinyDataset d;
  return d;
}

}  // namespace

TEST_CASE("run config parsing") {
  const auto c = parse_run_config("run.seed = 7  # trailing comment\n\n# whole line\ngrid.dims = 2, 6, 6\n");
  CHECK(c.seed == 7);
  CHECK(c.grid.dims == std::array<int, 3>{2, 6, 6});
  CHECK(parse_run_config(c.canonical_text()).canonical_text() == c.canonical_text());
  CHECK(parse_run_config("").hash() == RunConfig{}.hash());
  CHECK_THROWS_WITH_AS(parse_run_config("run.seed = 1\nrun.bogus = 2\n"), doctest::Contains("line 2"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("run.seed = 1\nrun.seed = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("run.seed 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("pretrain.epochs = many\n"), std::invalid_argument);

  const RunConfig d;
  CHECK(d.data_seed() != d.train_seed());
  const auto e = d.experiment();
  CHECK(e.pretrain.epochs == 24);
  CHECK(e.finetune.epochs == 12);
  CHECK(e.pretrain.seed == d.train_seed());
  CHECK(e.finetune.num_fusion_frames == 5);
  CHECK(e.finetune.dynamic_mode == DynamicMode::kDropDynamic);
}

TEST_CASE("UNISCENE_SEED overrides the configured seed") {
  ::setenv("UNISCENE_SEED", "1234", 1);
  const auto c = load_run_config({});
  ::unsetenv("UNISCENE_SEED");
  CHECK(c.seed == 1234);
  CHECK(load_run_config({}).seed == 42);
}

TEST_CASE("dataset round-trips through the directory layout") {
  auto& t = tiny();
  const auto stored = read_dataset(t.data);
  CHECK(stored.config.canonical_text() == parse_run_config(cli_fixture::kTinyConfig).canonical_text());
  REQUIRE(stored.sequences.size() == 4);
  auto regenerated = synth::generate_benchmark_sequence(stored.config.benchmark(), 1);
  synth::quantize_for_storage(regenerated);
  const auto& s = stored.sequences[1];
  REQUIRE(s.frames.size() == regenerated.frames.size());
  for (std::size_t k = 0; k < s.frames.size(); ++k) {
    CHECK(s.frames[k].point_cloud.points == regenerated.frames[k].point_cloud.points);
    CHECK(s.frames[k].images == regenerated.frames[k].images);
    CHECK(s.frames[k].ego_pose == regenerated.frames[k].ego_pose);
    CHECK(s.frames[k].is_keyframe == regenerated.frames[k].is_keyframe);
  }
  CHECK(fs::exists(sequence_dir(t.data, 0) / "frame_0000" / "cam_5.uoir"));
}

TEST_CASE("gen-labels is monotone in frame count") {
  auto& t = tiny();
  const auto one = gen_labels_command(t.data, 1, DynamicMode::kKeepAll, std::nullopt, t.root / "labels1");
  const auto three = gen_labels_command(t.data, 3, DynamicMode::kKeepAll, std::nullopt, t.root / "labels3");
  CHECK(one.grids == 12);
  CHECK(three.grids == one.grids);
  CHECK(three.occupied_cells >= one.occupied_cells);
  CHECK(fs::exists(t.root / "labels3" / "seq_0003_key_02.uosg"));
  CHECK(run({"gen-labels", "--dataset", t.data.string(), "--frames", "3", "--mode", "compensate", "--grid-dims",
             "2,6,6", "--out", (t.root / "labelsc").string()}) == 0);
  const auto g = io::decode_occupancy(read_file(t.root / "labelsc" / "seq_0000_key_01.uoog"));
  CHECK(g.spec.dims == std::array<int, 3>{2, 6, 6});
}

TEST_CASE("dump-grid csv lists the oracle's cells") {
  auto& t = tiny();
  Rng rng(5);
  PointCloud cloud;
  for (int i = 0; i < 300; ++i) {
    cloud.points.push_back({{rng.uniform(-7, 7), rng.uniform(-7, 7), rng.uniform(-3, 3)}, kGround, false});
  }
  const VoxelGridSpec spec{{-6.0, -6.0, -2.0}, {1.0, 1.0, 1.0}, {4, 12, 12}};
  const fs::path file = t.root / "cloud.uoog";
  write_file_atomic(file, io::encode_occupancy(occ::voxelize_occupancy(cloud, spec)));
  std::ostringstream want;
  want << "d,h,w\n";
  for (const auto& [d, h, w] : oracle::occupied_cells(cloud, spec)) want << d << ',' << h << ',' << w << '\n';
  CHECK(dump_grid_command(file, "csv-points") == want.str());

  const auto ascii = dump_grid_command(file, "ascii-slices");
  CHECK(ascii.rfind("slice d=0\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(ascii.begin(), ascii.end(), '#')) ==
        oracle::occupied_cells(cloud, spec).size());

  SemanticGrid sem(VoxelGridSpec{{0, 0, 0}, {1, 1, 1}, {1, 1, 3}});
  sem.data = {0, 3, 1};
  write_file_atomic(t.root / "s.uosg", io::encode_semantic(sem));
  CHECK(dump_grid_command(t.root / "s.uosg", "csv-points") == "d,h,w,class\n0,0,1,3\n0,0,2,1\n");
  CHECK(dump_grid_command(t.root / "s.uosg", "ascii-slices") == "slice d=0\n.31\n");
}

TEST_CASE("train, fine-tune and evaluate through the command line") {
  auto& t = tiny();
  const auto ck = t.root / "pre.uock";
  const auto ft = t.root / "ft.uock";
  const auto report = t.root / "ft.txt";
  REQUIRE(run({"pretrain", "--dataset", t.data.string(), "--config", t.config.string(), "--out", ck.string()}) == 0);
  REQUIRE(run({"finetune", "--dataset", t.data.string(), "--config", t.config.string(), "--init", ck.string(),
               "--out", ft.string(), "--report", report.string()}) == 0);
  const auto pre = io::decode_checkpoint(read_file(ck));
  const auto fine = io::decode_checkpoint(read_file(ft));
  CHECK(pre.provenance.stage == train::Stage::kPretrained);
  CHECK(fine.provenance.parent == train::digest(pre));
  const std::string text = cli_fixture::read_text(report);
  CHECK(text.find("parent = " + train::digest(pre)) != std::string::npos);
  CHECK(text.find("miou = ") != std::string::npos);

  const auto eval_report = t.root / "eval.txt";
  REQUIRE(run({"eval", "--checkpoint", ft.string(), "--dataset", t.data.string(), "--report",
               eval_report.string()}) == 0);
  CHECK(cli_fixture::read_text(eval_report).find("miou = ") != std::string::npos);

  REQUIRE(run({"finetune", "--dataset", t.data.string(), "--config", t.config.string(), "--scratch",
               "--label-fraction", "0.5", "--out", (t.root / "scratch.uock").string(), "--report",
               (t.root / "scratch.txt").string()}) == 0);
  CHECK(io::decode_checkpoint(read_file(t.root / "scratch.uock")).provenance.stage == train::Stage::kScratch);
}

TEST_CASE("exit codes") {
  auto& t = tiny();
  CHECK(run({}) == 1);
  CHECK(run({"frobnicate"}) == 1);
  CHECK(run({"synth"}) == 1);
  CHECK(run({"gen-labels", "--dataset", t.data.string(), "--frames", "3", "--mode", "sideways", "--out",
             (t.root / "x").string()}) == 1);
  CHECK(run({"finetune", "--dataset", t.data.string(), "--out", "a", "--report", "b"}) == 1);
  CHECK(run({"finetune", "--dataset", t.data.string(), "--init", "a", "--scratch", "--out", "a", "--report", "b"}) ==
        1);
  CHECK(run({"ablate", "--grid", "colour", "--seeds", "1", "--out", (t.root / "x").string()}) == 1);
  CHECK(run({"ablate", "--grid", "frames", "--seeds", "1,x", "--out", (t.root / "x").string()}) == 1);
  CHECK(run({"dump-grid", (t.root / "cloud.uoog").string(), "--format", "pretty"}) == 1);

  CHECK(run({"eval", "--checkpoint", (t.root / "missing.uock").string(), "--dataset", t.data.string(), "--report",
             (t.root / "r.txt").string()}) == 2);
  write_file_atomic(t.root / "junk.uoog", std::string_view("UOOGjunk"));
  CHECK(run({"dump-grid", (t.root / "junk.uoog").string()}) == 2);
  CHECK(run({"gen-labels", "--dataset", t.data.string(), "--frames", "2", "--out", (t.root / "x").string()}) == 2);
  const auto bad_cfg = t.root / "bad.cfg";
  write_file_atomic(bad_cfg, std::string_view("rig.lenses = 3\n"));
  CHECK(run({"synth", "--config", bad_cfg.string(), "--out", (t.root / "y").string()}) == 2);

  const std::string cmd = std::string(UNISCENE_BINARY) + " frobnicate 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 1);
}
