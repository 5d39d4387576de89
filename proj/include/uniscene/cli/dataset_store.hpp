// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "uniscene/cli/run_config.hpp"
#include "uniscene/synth/sequence.hpp"

namespace uniscene::cli {

// Layout under a dataset directory:
//   config.txt                         canonical run configuration
//   seq_NNNN/frames.csv                index,timestamp,is_keyframe
//   seq_NNNN/tracks.csv                box annotations
//   seq_NNNN/frame_NNNN/pose.uops      ego -> world
//   seq_NNNN/frame_NNNN/lidar.uopc     ego-frame sweep
//   seq_NNNN/frame_NNNN/cam_K.uoir     one raster per camera

struct StoredDataset {
  RunConfig config;
  std::vector<synth::SequenceData> sequences;
};

/// Sequences must already be quantized to storage precision.
void write_dataset(const std::filesystem::path& dir, const RunConfig& config,
                   std::span<const synth::SequenceData> sequences);

/// Throws FormatError / std::invalid_argument on malformed content.
StoredDataset read_dataset(const std::filesystem::path& dir);

std::filesystem::path sequence_dir(const std::filesystem::path& dir, std::size_t index);

}  // namespace uniscene::cli
