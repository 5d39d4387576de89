// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uniscene/cli/run_config.hpp"

namespace uniscene::cli {

namespace fs = std::filesystem;

/// Generates the benchmark described by `config` and writes it under `out_dir`.
void synth_command(const RunConfig& config, const fs::path& out_dir);

struct LabelSummary {
  std::size_t grids = 0;
  std::size_t occupied_cells = 0;  // summed over all written occupancy grids
};

/// Writes seq_NNNN_key_KK.uoog / .uosg for every keyframe of the dataset.
/// `grid` defaults to the dataset's configured grid.
LabelSummary gen_labels_command(const fs::path& dataset, int frames, DynamicMode mode,
                                const std::optional<VoxelGridSpec>& grid, const fs::path& out_dir);

/// Training settings come from `config`; the data (and its held-out split)
/// from the dataset directory.
void pretrain_command(const fs::path& dataset, const RunConfig& config, const fs::path& out_checkpoint);

void finetune_command(const fs::path& dataset, const RunConfig& config, const std::optional<fs::path>& init,
                      std::optional<double> label_fraction, const fs::path& out_checkpoint,
                      const fs::path& out_report);

/// Rebuilds the model and label recipe from the checkpoint's provenance.
void eval_command(const fs::path& checkpoint, const fs::path& dataset, const fs::path& out_report);

/// Writes <out_dir>/ablation_<grid>.csv and returns its path.
fs::path ablate_command(const RunConfig& config, const std::string& grid, const std::vector<std::uint64_t>& seeds,
                        const fs::path& out_dir);

/// "ascii-slices" or "csv-points" listing of a .uoog or .uosg file.
std::string dump_grid_command(const fs::path& grid_file, const std::string& format);

/// Full command-line entry point. Returns 0 on success, 1 on usage errors
/// and 2 on data or contract errors; diagnostics go to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace uniscene::cli
