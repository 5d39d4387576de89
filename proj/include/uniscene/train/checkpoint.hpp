// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "uniscene/common/binary_io.hpp"
#include "uniscene/nn/model.hpp"

namespace uniscene::train {

enum class Stage { kPretrained, kFinetuned, kScratch };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);

/// Where a checkpoint came from. `parent` is the digest of the checkpoint a
/// fine-tune started from, or "none".
struct Provenance {
  Stage stage = Stage::kScratch;
  int epoch = 0;
  std::string parent = "none";
  std::string config_hash;
  std::string config_text;

  bool operator==(const Provenance&) const = default;
};

/// Named parameters plus provenance. Values are held at 32-bit precision so
/// that an in-memory checkpoint equals its reloaded file.
struct Checkpoint {
  nn::ModelParams params;
  Provenance provenance;
};

/// Rounds every parameter value to float and back.
nn::ModelParams quantize_params(nn::ModelParams params);

Bytes serialize_checkpoint(const Checkpoint& ck);
/// Throws FormatError with the failing byte offset.
Checkpoint parse_checkpoint(const Bytes& bytes);

/// Git blob id of the serialized checkpoint.
std::string digest(const Checkpoint& ck);

/// Keeps the encoder and depth-head blocks, dropping both decoders.
Checkpoint strip_decoder(const Checkpoint& ck);

}  // namespace uniscene::train
