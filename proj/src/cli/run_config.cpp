// SPDX-License-Identifier: Apache-2.0
#include "uniscene/cli/run_config.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "uniscene/common/binary_io.hpp"
#include "uniscene/common/digest.hpp"
#include "uniscene/common/rng.hpp"
#include "uniscene/common/text.hpp"

namespace uniscene::cli {

namespace {

struct Field {
  std::string key;
  std::function<std::string()> get;
  std::function<void(std::string_view)> set;
};

Field int_field(std::string key, int& v) {
  return {std::move(key), [&v] { return std::to_string(v); },
          [&v](std::string_view s) { v = static_cast<int>(parse_int(s)); }};
}

Field real_field(std::string key, double& v) {
  return {std::move(key), [&v] { return format_real(v); }, [&v](std::string_view s) { v = parse_real(s); }};
}

Field vec_field(std::string key, Vec3& v) {
  return {std::move(key), [&v] { return format_real(v.x) + "," + format_real(v.y) + "," + format_real(v.z); },
          [&v](std::string_view s) {
            const auto parts = split(s, ',');
            if (parts.size() != 3) throw std::invalid_argument("expected three comma-separated values");
            v = {parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
          }};
}

Field mode_field(std::string key, DynamicMode& m) {
  return {std::move(key), [&m] { return std::string(to_string(m)); },
          [&m](std::string_view s) { m = parse_dynamic_mode(s); }};
}

void stage_fields(std::vector<Field>& f, const std::string& prefix, StageSettings& st) {
  f.push_back(int_field(prefix + ".epochs", st.epochs));
  f.push_back(int_field(prefix + ".batch", st.batch));
  f.push_back({prefix + ".optimizer", [&st] { return std::string(train::to_string(st.optimizer.kind)); },
               [&st](std::string_view s) { st.optimizer.kind = train::parse_optimizer_kind(s); }});
  f.push_back(real_field(prefix + ".learning_rate", st.optimizer.learning_rate));
  f.push_back(real_field(prefix + ".beta1", st.optimizer.beta1));
  f.push_back(real_field(prefix + ".beta2", st.optimizer.beta2));
  f.push_back(real_field(prefix + ".epsilon", st.optimizer.epsilon));
  f.push_back(real_field(prefix + ".label_fraction", st.label_fraction));
}

// Every key in canonical order, bound to `c`.
std::vector<Field> fields(RunConfig& c) {
  std::vector<Field> f;
  f.push_back({"run.seed", [&c] { return std::to_string(c.seed); },
               [&c](std::string_view s) {
                 const long long v = parse_int(s);
                 if (v < 0) throw std::invalid_argument("seed must be non-negative");
                 c.seed = static_cast<std::uint64_t>(v);
               }});
  f.push_back(int_field("data.num_sequences", c.num_sequences));
  f.push_back(int_field("data.keyframe_stride", c.keyframe_stride));
  f.push_back(real_field("data.held_out_fraction", c.held_out_fraction));

  f.push_back(int_field("scene.num_static_boxes", c.scene.num_static_boxes));
  f.push_back(int_field("scene.num_dynamic_boxes", c.scene.num_dynamic_boxes));
  f.push_back(int_field("scene.max_objects", c.scene.max_objects));
  f.push_back(real_field("scene.ground_z", c.scene.ground_z));
  f.push_back(real_field("scene.x_min", c.scene.x_min));
  f.push_back(real_field("scene.x_max", c.scene.x_max));
  f.push_back(real_field("scene.static_lateral_min", c.scene.static_lateral_min));
  f.push_back(real_field("scene.static_lateral_max", c.scene.static_lateral_max));
  f.push_back(vec_field("scene.static_half_min", c.scene.static_half_min));
  f.push_back(vec_field("scene.static_half_max", c.scene.static_half_max));
  f.push_back(real_field("scene.dynamic_lateral_min", c.scene.dynamic_lateral_min));
  f.push_back(real_field("scene.dynamic_lateral_max", c.scene.dynamic_lateral_max));
  f.push_back(vec_field("scene.dynamic_half_extents", c.scene.dynamic_half_extents));
  f.push_back(real_field("scene.speed_min", c.scene.speed_min));
  f.push_back(real_field("scene.speed_max", c.scene.speed_max));
  f.push_back(real_field("scene.min_gap", c.scene.min_gap));
  f.push_back(int_field("scene.max_placement_attempts", c.scene.max_placement_attempts));

  f.push_back(int_field("traj.num_poses", c.trajectory.num_poses));
  f.push_back(real_field("traj.dt", c.trajectory.dt));
  f.push_back(real_field("traj.speed_min", c.trajectory.speed_min));
  f.push_back(real_field("traj.speed_max", c.trajectory.speed_max));
  f.push_back(real_field("traj.yaw_rate_max", c.trajectory.yaw_rate_max));
  f.push_back(real_field("traj.ego_height", c.trajectory.ego_height));

  f.push_back(int_field("rig.cameras", c.rig.cameras));
  f.push_back(int_field("rig.width", c.rig.width));
  f.push_back(int_field("rig.height", c.rig.height));
  f.push_back(real_field("rig.hfov_deg", c.rig.hfov_deg));
  f.push_back(real_field("rig.pitch_deg", c.rig.pitch_deg));
  f.push_back(real_field("rig.max_depth", c.camera_max_depth));

  f.push_back(int_field("lidar.elevation_channels", c.lidar.elevation_channels));
  f.push_back(int_field("lidar.azimuth_steps", c.lidar.azimuth_steps));
  f.push_back(real_field("lidar.max_range", c.lidar.max_range));
  f.push_back(real_field("lidar.elevation_min", c.lidar.elevation_min));
  f.push_back(real_field("lidar.elevation_max", c.lidar.elevation_max));

  f.push_back(vec_field("grid.origin", c.grid.origin));
  f.push_back({"grid.voxel_size",
               [&c] {
                 return format_real(c.grid.voxel_size[0]) + "," + format_real(c.grid.voxel_size[1]) + "," +
                        format_real(c.grid.voxel_size[2]);
               },
               [&c](std::string_view s) {
                 const auto parts = split(s, ',');
                 if (parts.size() != 3) throw std::invalid_argument("expected three comma-separated values");
                 for (std::size_t i = 0; i < 3; ++i) c.grid.voxel_size[i] = parse_real(parts[i]);
               }});
  f.push_back({"grid.dims",
               [&c] {
                 return std::to_string(c.grid.dims[0]) + "," + std::to_string(c.grid.dims[1]) + "," +
                        std::to_string(c.grid.dims[2]);
               },
               [&c](std::string_view s) {
                 const auto parts = split(s, ',');
                 if (parts.size() != 3) throw std::invalid_argument("expected three comma-separated values");
                 for (std::size_t i = 0; i < 3; ++i) c.grid.dims[i] = static_cast<int>(parse_int(parts[i]));
               }});

  f.push_back(int_field("frustum.depth_bins", c.frustum.depth_bins));
  f.push_back(real_field("frustum.depth_min", c.frustum.depth_min));
  f.push_back(real_field("frustum.depth_max", c.frustum.depth_max));

  f.push_back(int_field("model.encoder_width", c.encoder_width));
  f.push_back(int_field("model.voxel_channels", c.voxel_channels));
  f.push_back(int_field("model.decoder_width", c.decoder_width));

  f.push_back(int_field("labels.pretext_frames", c.pretext.frames));
  f.push_back(mode_field("labels.pretext_mode", c.pretext.mode));
  f.push_back(int_field("labels.semantic_frames", c.semantic.frames));
  f.push_back(mode_field("labels.semantic_mode", c.semantic.mode));

  f.push_back(real_field("loss.alpha_pos", c.focal.alpha_pos));
  f.push_back(real_field("loss.alpha_neg", c.focal.alpha_neg));
  f.push_back(real_field("loss.gamma", c.focal.gamma));
  f.push_back({"loss.class_weights",
               [&c] {
                 std::string s;
                 for (double w : c.class_weights) s += (s.empty() ? "" : ",") + format_real(w);
                 return s;
               },
               [&c](std::string_view s) {
                 c.class_weights.clear();
                 for (const auto& part : split(s, ',')) c.class_weights.push_back(parse_real(part));
               }});

  stage_fields(f, "pretrain", c.pretrain);
  stage_fields(f, "finetune", c.finetune);
  return f;
}

train::TrainConfig stage_config(const RunConfig& c, const StageSettings& st, const train::LabelRecipe& labels) {
  train::TrainConfig t;
  t.epochs = st.epochs;
  t.batch = st.batch;
  t.optimizer = st.optimizer;
  t.seed = c.train_seed();
  t.num_fusion_frames = labels.frames;
  t.label_fraction = st.label_fraction;
  t.dynamic_mode = labels.mode;
  t.focal = c.focal;
  t.class_weights = c.class_weights;
  t.encoder_width = c.encoder_width;
  t.voxel_channels = c.voxel_channels;
  t.decoder_width = c.decoder_width;
  t.num_classes = kNumClasses;
  t.frustum = c.frustum;
  t.grid = c.grid;
  t.rig = c.rig;
  return t;
}

}  // namespace

std::uint64_t RunConfig::data_seed() const { return derive_seed(seed, "data"); }
std::uint64_t RunConfig::train_seed() const { return derive_seed(seed, "train"); }

synth::BenchmarkConfig RunConfig::benchmark() const {
  synth::BenchmarkConfig b;
  b.seed = data_seed();
  b.num_sequences = num_sequences;
  b.keyframe_stride = keyframe_stride;
  b.scene = scene;
  b.trajectory = trajectory;
  b.rig = rig.build();
  b.lidar = lidar;
  b.camera_max_depth = camera_max_depth;
  return b;
}

train::Experiment RunConfig::experiment() const {
  train::Experiment e;
  e.pretrain = stage_config(*this, pretrain, pretext);
  e.finetune = stage_config(*this, finetune, semantic);
  e.held_out_fraction = held_out_fraction;
  e.pretrain.validate();
  e.finetune.validate();
  return e;
}

std::string RunConfig::canonical_text() const {
  RunConfig copy = *this;
  std::ostringstream out;
  for (const auto& f : fields(copy)) out << f.key << " = " << f.get() << '\n';
  return out.str();
}

std::string RunConfig::hash() const { return sha1_hex(canonical_text()); }

RunConfig parse_run_config(std::string_view text) {
  RunConfig c;
  auto table = fields(c);
  std::map<std::string, Field*, std::less<>> by_key;
  for (auto& f : table) by_key.emplace(f.key, &f);
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument(where + "expected 'section.key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw std::invalid_argument(where + "unknown key '" + std::string(key) + "'");
    if (const auto [pos, fresh] = seen.emplace(std::string(key), line_no); !fresh) {
      throw std::invalid_argument(where + "key '" + std::string(key) + "' already set on line " +
                                  std::to_string(pos->second));
    }
    try {
      it->second->set(trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + std::string(key) + ": " + e.what());
    }
  }
  c.scene.validate();
  c.trajectory.validate();
  c.lidar.validate();
  if (c.num_sequences < 2) throw std::invalid_argument("data.num_sequences must be >= 2");
  if (c.keyframe_stride < 1) throw std::invalid_argument("data.keyframe_stride must be >= 1");
  if (!(c.camera_max_depth > 0.0)) throw std::invalid_argument("rig.max_depth must be positive");
  c.experiment();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  if (!path.empty()) {
    const Bytes bytes = read_file(path);
    text.assign(bytes.begin(), bytes.end());
  }
  RunConfig c = parse_run_config(text);
  if (const char* env = std::getenv("UNISCENE_SEED"); env != nullptr && *env != '\0') {
    const long long v = parse_int(env);
    if (v < 0) throw std::invalid_argument("UNISCENE_SEED must be non-negative");
    c.seed = static_cast<std::uint64_t>(v);
  }
  return c;
}

}  // namespace uniscene::cli
