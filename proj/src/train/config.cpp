// SPDX-License-Identifier: Apache-2.0
#include "uniscene/train/config.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "uniscene/common/digest.hpp"
#include "uniscene/common/text.hpp"

namespace uniscene::train {

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::kSgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer_kind(std::string_view text) {
  if (text == "sgd") return OptimizerKind::kSgd;
  if (text == "adam") return OptimizerKind::kAdam;
  throw std::invalid_argument("unknown optimizer '" + std::string(text) + "'");
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("optimizer: learning_rate must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("optimizer: betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("optimizer: epsilon must be positive");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (batch < 1) throw std::invalid_argument("train: batch must be >= 1");
  if (!(label_fraction > 0.0 && label_fraction <= 1.0)) {
    throw std::invalid_argument("train: label_fraction must be in (0, 1]");
  }
  if (num_fusion_frames < 1 || num_fusion_frames % 2 == 0) {
    throw std::invalid_argument("train: num_fusion_frames must be a positive odd count");
  }
  optimizer.validate();
  focal.validate();
  if (class_weights.size() != static_cast<std::size_t>(num_classes)) {
    throw std::invalid_argument("train: class_weights needs one entry per class");
  }
  for (double w : class_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("train: class weights must be >= 0");
  }
  frustum.validate();
  grid.validate();
  rig.validate();
  model_config().validate();
}

nn::ModelConfig TrainConfig::model_config() const {
  nn::ModelConfig m;
  m.image_channels = 4;
  m.encoder_width = encoder_width;
  m.voxel_channels = voxel_channels;
  m.grid_depth = grid.depth();
  m.depth_bins = frustum.depth_bins;
  m.decoder_width = decoder_width;
  m.num_classes = num_classes;
  return m;
}

std::string TrainConfig::canonical_text() const {
  std::ostringstream out;
  auto line = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  auto list = [](auto first, auto last) {
    std::string s;
    for (auto it = first; it != last; ++it) {
      if (!s.empty()) s += ',';
      s += format_real(static_cast<double>(*it));
    }
    return s;
  };
  line("train.epochs", std::to_string(epochs));
  line("train.batch", std::to_string(batch));
  line("train.optimizer", std::string(to_string(optimizer.kind)));
  line("train.learning_rate", format_real(optimizer.learning_rate));
  line("train.beta1", format_real(optimizer.beta1));
  line("train.beta2", format_real(optimizer.beta2));
  line("train.epsilon", format_real(optimizer.epsilon));
  line("train.seed", std::to_string(seed));
  line("train.num_fusion_frames", std::to_string(num_fusion_frames));
  line("train.label_fraction", format_real(label_fraction));
  line("train.dynamic_mode", std::string(to_string(dynamic_mode)));
  line("loss.alpha_pos", format_real(focal.alpha_pos));
  line("loss.alpha_neg", format_real(focal.alpha_neg));
  line("loss.gamma", format_real(focal.gamma));
  line("loss.class_weights", list(class_weights.begin(), class_weights.end()));
  line("model.encoder_width", std::to_string(encoder_width));
  line("model.voxel_channels", std::to_string(voxel_channels));
  line("model.decoder_width", std::to_string(decoder_width));
  line("model.num_classes", std::to_string(num_classes));
  line("frustum.depth_bins", std::to_string(frustum.depth_bins));
  line("frustum.depth_min", format_real(frustum.depth_min));
  line("frustum.depth_max", format_real(frustum.depth_max));
  const double origin[3] = {grid.origin.x, grid.origin.y, grid.origin.z};
  line("grid.origin", list(origin, origin + 3));
  line("grid.voxel_size", list(grid.voxel_size.begin(), grid.voxel_size.end()));
  line("grid.dims", list(grid.dims.begin(), grid.dims.end()));
  line("rig.cameras", std::to_string(rig.cameras));
  line("rig.width", std::to_string(rig.width));
  line("rig.height", std::to_string(rig.height));
  line("rig.hfov_deg", format_real(rig.hfov_deg));
  line("rig.pitch_deg", format_real(rig.pitch_deg));
  return out.str();
}

std::string TrainConfig::hash() const { return sha1_hex(canonical_text()); }

namespace {

std::vector<double> parse_list(const std::string& value, std::size_t expected, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(value, ',')) out.push_back(parse_real(item));
  if (expected != 0 && out.size() != expected) {
    throw std::invalid_argument(key + ": expected " + std::to_string(expected) + " values");
  }
  return out;
}

}  // namespace

TrainConfig parse_train_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  for (const auto& raw : split(text, '\n')) {
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + raw);
    const std::string key(trim(std::string_view(raw).substr(0, eq)));
    if (!kv.emplace(key, std::string(trim(std::string_view(raw).substr(eq + 1)))).second) {
      throw std::invalid_argument("duplicate config key " + key);
    }
  }
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing config key " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_int = [&](const std::string& key) { return static_cast<int>(parse_int(take(key))); };
  auto take_real = [&](const std::string& key) { return parse_real(take(key)); };

  TrainConfig c;
  c.epochs = take_int("train.epochs");
  c.batch = take_int("train.batch");
  c.optimizer.kind = parse_optimizer_kind(take("train.optimizer"));
  c.optimizer.learning_rate = take_real("train.learning_rate");
  c.optimizer.beta1 = take_real("train.beta1");
  c.optimizer.beta2 = take_real("train.beta2");
  c.optimizer.epsilon = take_real("train.epsilon");
  c.seed = static_cast<std::uint64_t>(std::stoull(take("train.seed")));
  c.num_fusion_frames = take_int("train.num_fusion_frames");
  c.label_fraction = take_real("train.label_fraction");
  c.dynamic_mode = parse_dynamic_mode(take("train.dynamic_mode"));
  c.focal.alpha_pos = take_real("loss.alpha_pos");
  c.focal.alpha_neg = take_real("loss.alpha_neg");
  c.focal.gamma = take_real("loss.gamma");
  c.class_weights = parse_list(take("loss.class_weights"), 0, "loss.class_weights");
  c.encoder_width = take_int("model.encoder_width");
  c.voxel_channels = take_int("model.voxel_channels");
  c.decoder_width = take_int("model.decoder_width");
  c.num_classes = take_int("model.num_classes");
  c.frustum.depth_bins = take_int("frustum.depth_bins");
  c.frustum.depth_min = take_real("frustum.depth_min");
  c.frustum.depth_max = take_real("frustum.depth_max");
  const auto origin = parse_list(take("grid.origin"), 3, "grid.origin");
  c.grid.origin = {origin[0], origin[1], origin[2]};
  const auto size = parse_list(take("grid.voxel_size"), 3, "grid.voxel_size");
  const auto dims = parse_list(take("grid.dims"), 3, "grid.dims");
  for (int i = 0; i < 3; ++i) {
    c.grid.voxel_size[static_cast<std::size_t>(i)] = size[static_cast<std::size_t>(i)];
    c.grid.dims[static_cast<std::size_t>(i)] = static_cast<int>(dims[static_cast<std::size_t>(i)]);
  }
  c.rig.cameras = take_int("rig.cameras");
  c.rig.width = take_int("rig.width");
  c.rig.height = take_int("rig.height");
  c.rig.hfov_deg = take_real("rig.hfov_deg");
  c.rig.pitch_deg = take_real("rig.pitch_deg");
  if (!kv.empty()) throw std::invalid_argument("unknown config key " + kv.begin()->first);
  c.validate();
  return c;
}

TrainConfig default_finetune_config() {
  TrainConfig c;
  c.epochs = 12;
  c.num_fusion_frames = 5;
  c.dynamic_mode = DynamicMode::kDropDynamic;
  return c;
}

}  // namespace uniscene::train
