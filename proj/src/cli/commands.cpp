// SPDX-License-Identifier: Apache-2.0
#include "uniscene/cli/commands.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "uniscene/cli/dataset_store.hpp"
#include "uniscene/common/text.hpp"
#include "uniscene/io/formats.hpp"
#include "uniscene/occ/voxelize.hpp"
#include "uniscene/train/ablation.hpp"

namespace uniscene::cli {

namespace {

// Flag-level mistakes detected after parsing; mapped to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string grid_file_stem(std::size_t seq, std::size_t key) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "seq_%04zu_key_%02zu", seq, key);
  return buf;
}

// Train/held-out samples of a stored dataset for one stage's label recipe.
struct StageData {
  std::vector<train::Sample> train;
  std::vector<train::Sample> held_out;
};

StageData stage_data(const StoredDataset& ds, const train::TrainConfig& pretext, const train::TrainConfig& semantic) {
  const auto split = train::split_sequences(static_cast<int>(ds.sequences.size()), ds.config.held_out_fraction);
  const train::LabelRecipe p{pretext.num_fusion_frames, pretext.dynamic_mode};
  const train::LabelRecipe s{semantic.num_fusion_frames, semantic.dynamic_mode};
  return {train::build_samples(ds.sequences, split.train, semantic.grid, p, s),
          train::build_samples(ds.sequences, split.held_out, semantic.grid, p, s)};
}

void require_same_geometry(const RunConfig& config, const RunConfig& data) {
  if (!(config.rig == data.rig)) throw std::invalid_argument("config rig does not match the dataset's rig");
}

}  // namespace

void synth_command(const RunConfig& config, const fs::path& out_dir) {
  auto sequences = synth::generate_benchmark(config.benchmark());
  for (auto& s : sequences) synth::quantize_for_storage(s);
  write_dataset(out_dir, config, sequences);
}

LabelSummary gen_labels_command(const fs::path& dataset, int frames, DynamicMode mode,
                                const std::optional<VoxelGridSpec>& grid, const fs::path& out_dir) {
  const auto ds = read_dataset(dataset);
  const VoxelGridSpec spec = grid.value_or(ds.config.grid);
  spec.validate();
  fs::create_directories(out_dir);
  LabelSummary summary;
  for (std::size_t s = 0; s < ds.sequences.size(); ++s) {
    const auto clouds = train::keyframe_clouds(ds.sequences[s]);
    for (std::size_t k = 0; k < clouds.size(); ++k) {
      const auto cloud = occ::fuse_frames(clouds, k, frames, mode, ds.sequences[s].tracks);
      const auto occupancy = occ::voxelize_occupancy(cloud, spec);
      const auto semantic = occ::voxelize_semantic(cloud, spec);
      write_file_atomic(out_dir / (grid_file_stem(s, k) + ".uoog"), io::encode_occupancy(occupancy));
      write_file_atomic(out_dir / (grid_file_stem(s, k) + ".uosg"), io::encode_semantic(semantic));
      ++summary.grids;
      summary.occupied_cells += occupancy.occupied_count();
    }
  }
  return summary;
}

void pretrain_command(const fs::path& dataset, const RunConfig& config, const fs::path& out_checkpoint) {
  const auto ds = read_dataset(dataset);
  require_same_geometry(config, ds.config);
  const auto e = config.experiment();
  const auto data = stage_data(ds, e.pretrain, e.pretrain);
  const auto result = train::pretrain(data.train, e.pretrain);
  write_file_atomic(out_checkpoint, io::encode_checkpoint(result.checkpoint));
}

void finetune_command(const fs::path& dataset, const RunConfig& config, const std::optional<fs::path>& init,
                      std::optional<double> label_fraction, const fs::path& out_checkpoint,
                      const fs::path& out_report) {
  const auto ds = read_dataset(dataset);
  require_same_geometry(config, ds.config);
  auto e = config.experiment();
  if (label_fraction) e.finetune.label_fraction = *label_fraction;
  e.finetune.validate();
  const auto data = stage_data(ds, e.pretrain, e.finetune);
  std::optional<train::Checkpoint> start;
  if (init) start = io::decode_checkpoint(read_file(*init));
  const auto result = train::finetune(start ? &*start : nullptr, data.train, data.held_out, e.finetune);
  write_file_atomic(out_checkpoint, io::encode_checkpoint(result.checkpoint));
  std::string report = "stage = " + std::string(train::to_string(result.checkpoint.provenance.stage)) + "\n";
  report += "parent = " + result.checkpoint.provenance.parent + "\n";
  report += "checkpoint = " + train::digest(result.checkpoint) + "\n";
  report += result.report.to_text();
  write_file_atomic(out_report, report);
}

void eval_command(const fs::path& checkpoint, const fs::path& dataset, const fs::path& out_report) {
  const auto ck = io::decode_checkpoint(read_file(checkpoint));
  const auto config = train::parse_train_config(ck.provenance.config_text);
  const auto ds = read_dataset(dataset);
  if (!(config.rig == ds.config.rig)) throw std::invalid_argument("checkpoint rig does not match the dataset's rig");
  const auto data = stage_data(ds, config, config);
  const auto report = train::evaluate(ck, data.held_out, config);
  std::string text = "stage = " + std::string(train::to_string(ck.provenance.stage)) + "\n";
  text += "checkpoint = " + train::digest(ck) + "\n";
  text += report.to_text();
  write_file_atomic(out_report, text);
}

fs::path ablate_command(const RunConfig& config, const std::string& grid, const std::vector<std::uint64_t>& seeds,
                        const fs::path& out_dir) {
  const auto which = train::parse_ablation_grid(grid);
  auto sequences = synth::generate_benchmark(config.benchmark());
  for (auto& s : sequences) synth::quantize_for_storage(s);
  const auto rows = train::run_ablation(which, sequences, config.experiment(), seeds);
  fs::create_directories(out_dir);
  const fs::path out = out_dir / ("ablation_" + grid + ".csv");
  write_file_atomic(out, train::ablation_csv(rows));
  return out;
}

std::string dump_grid_command(const fs::path& grid_file, const std::string& format) {
  if (format != "ascii-slices" && format != "csv-points") {
    throw UsageError("--format must be ascii-slices or csv-points");
  }
  const Bytes bytes = read_file(grid_file);
  const std::string magic = io::sniff_magic(bytes);
  SemanticGrid grid;
  bool semantic = false;
  if (magic == "UOOG") {
    const auto occ = io::decode_occupancy(bytes);
    grid = SemanticGrid(occ.spec);
    for (std::size_t i = 0; i < occ.data.size(); ++i) grid.data[i] = occ.data[i];
  } else if (magic == "UOSG") {
    grid = io::decode_semantic(bytes);
    semantic = true;
  } else {
    throw FormatError(0, "magic \"UOOG\" or \"UOSG\"");
  }
  const auto& spec = grid.spec;
  std::ostringstream out;
  if (format == "csv-points") {
    out << (semantic ? "d,h,w,class\n" : "d,h,w\n");
    for (int d = 0; d < spec.depth(); ++d) {
      for (int h = 0; h < spec.height(); ++h) {
        for (int w = 0; w < spec.width(); ++w) {
          const ClassId c = grid.at(d, h, w);
          if (c == kFree) continue;
          out << d << ',' << h << ',' << w;
          if (semantic) out << ',' << static_cast<int>(c);
          out << '\n';
        }
      }
    }
  } else {
    for (int d = 0; d < spec.depth(); ++d) {
      out << "slice d=" << d << '\n';
      for (int h = 0; h < spec.height(); ++h) {
        for (int w = 0; w < spec.width(); ++w) {
          const ClassId c = grid.at(d, h, w);
          out << (c == kFree ? '.' : (semantic ? static_cast<char>('0' + c) : '#'));
        }
        out << '\n';
      }
    }
  }
  return out.str();
}

namespace {

std::vector<double> parse_triple(const std::string& text, const char* flag) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw UsageError(std::string(flag) + " expects three comma-separated values");
  std::vector<double> v;
  for (const auto& p : parts) v.push_back(parse_real(p));
  return v;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Occupancy pre-training pipeline on synthetic multi-camera data", "uniscene"};
  app.require_subcommand(1);

  std::string config_path, out_dir, dataset, out_ck, out_report, init_path, grid_name, seeds_text, grid_file;
  std::string mode_text = "keep_all", format = "ascii-slices", origin_text, size_text, dims_text;
  int frames = 1;
  double fraction = 1.0;
  bool scratch = false;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic image-LiDAR dataset");
  synth->add_option("--config", config_path, "Run configuration file");
  synth->add_option("--out", out_dir, "Output dataset directory")->required();

  auto* labels = app.add_subcommand("gen-labels", "Fuse and voxelize keyframe sweeps into label grids");
  labels->add_option("--dataset", dataset, "Dataset directory")->required();
  labels->add_option("--frames", frames, "Keyframes fused per label (odd)")->required();
  labels->add_option("--mode", mode_text, "keep_all | drop_dynamic | compensate");
  labels->add_option("--grid-origin", origin_text, "x,y,z of the minimum corner");
  labels->add_option("--voxel-size", size_text, "v_Z,v_H,v_W");
  labels->add_option("--grid-dims", dims_text, "D,H,W");
  labels->add_option("--out", out_dir, "Output directory")->required();

  auto* pre = app.add_subcommand("pretrain", "Pre-train encoder + occupancy decoder");
  pre->add_option("--dataset", dataset, "Dataset directory")->required();
  pre->add_option("--config", config_path, "Run configuration file");
  pre->add_option("--out", out_ck, "Output checkpoint")->required();

  auto* fine = app.add_subcommand("finetune", "Fine-tune for semantic occupancy");
  fine->add_option("--dataset", dataset, "Dataset directory")->required();
  fine->add_option("--config", config_path, "Run configuration file");
  auto* init_opt = fine->add_option("--init", init_path, "Pre-trained checkpoint to warm-start from");
  auto* scratch_opt = fine->add_flag("--scratch", scratch, "Start from random weights");
  init_opt->excludes(scratch_opt);
  auto* frac_opt = fine->add_option("--label-fraction", fraction, "Fraction of labelled training samples");
  fine->add_option("--out", out_ck, "Output checkpoint")->required();
  fine->add_option("--report", out_report, "Output report")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the held-out split");
  eval->add_option("--checkpoint", out_ck, "Checkpoint file")->required();
  eval->add_option("--dataset", dataset, "Dataset directory")->required();
  eval->add_option("--report", out_report, "Output report")->required();

  auto* ablate = app.add_subcommand("ablate", "Run an ablation grid over several training seeds");
  ablate->add_option("--config", config_path, "Run configuration file");
  ablate->add_option("--grid", grid_name, "frames | fraction | loss | supervision")->required();
  ablate->add_option("--seeds", seeds_text, "Comma-separated training seeds")->required();
  ablate->add_option("--out", out_dir, "Output directory")->required();

  auto* dump = app.add_subcommand("dump-grid", "Print an occupancy or semantic grid file");
  dump->add_option("grid_file", grid_file, "Grid file (.uoog or .uosg)")->required();
  dump->add_option("--format", format, "ascii-slices | csv-points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      synth_command(load_run_config(config_path), out_dir);
    } else if (labels->parsed()) {
      std::optional<VoxelGridSpec> grid;
      if (!origin_text.empty() || !size_text.empty() || !dims_text.empty()) {
        VoxelGridSpec spec = read_dataset(dataset).config.grid;
        if (!origin_text.empty()) {
          const auto o = parse_triple(origin_text, "--grid-origin");
          spec.origin = {o[0], o[1], o[2]};
        }
        if (!size_text.empty()) {
          const auto s = parse_triple(size_text, "--voxel-size");
          for (std::size_t i = 0; i < 3; ++i) spec.voxel_size[i] = s[i];
        }
        if (!dims_text.empty()) {
          const auto d = parse_triple(dims_text, "--grid-dims");
          for (std::size_t i = 0; i < 3; ++i) spec.dims[i] = static_cast<int>(d[i]);
        }
        grid = spec;
      }
      DynamicMode mode;
      try {
        mode = parse_dynamic_mode(mode_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto summary = gen_labels_command(dataset, frames, mode, grid, out_dir);
      std::cout << "grids " << summary.grids << " occupied_cells " << summary.occupied_cells << '\n';
    } else if (pre->parsed()) {
      pretrain_command(dataset, load_run_config(config_path), out_ck);
    } else if (fine->parsed()) {
      if (init_path.empty() && !scratch) throw UsageError("finetune needs --init CHECKPOINT or --scratch");
      std::optional<fs::path> init;
      if (!init_path.empty()) init = fs::path(init_path);
      std::optional<double> frac;
      if (frac_opt->count() > 0) frac = fraction;
      finetune_command(dataset, load_run_config(config_path), init, frac, out_ck, out_report);
    } else if (eval->parsed()) {
      eval_command(out_ck, dataset, out_report);
    } else if (ablate->parsed()) {
      std::vector<std::uint64_t> seeds;
      for (const auto& s : split(seeds_text, ',')) {
        long long v;
        try {
          v = parse_int(s);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("--seeds: ") + e.what());
        }
        if (v < 0) throw UsageError("--seeds: seeds must be non-negative");
        seeds.push_back(static_cast<std::uint64_t>(v));
      }
      try {
        train::parse_ablation_grid(grid_name);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      std::cout << ablate_command(load_run_config(config_path), grid_name, seeds, out_dir).string() << '\n';
    } else if (dump->parsed()) {
      std::cout << dump_grid_command(grid_file, format);
    }
  } catch (const UsageError& e) {
    std::cerr << "uniscene: " << e.what() << '\n';
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "uniscene: malformed file: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "uniscene: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace uniscene::cli
