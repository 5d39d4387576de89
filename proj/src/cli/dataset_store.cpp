// SPDX-License-Identifier: Apache-2.0
#include "uniscene/cli/dataset_store.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "uniscene/common/text.hpp"
#include "uniscene/io/formats.hpp"

namespace uniscene::cli {

namespace fs = std::filesystem;

namespace {

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%04zu", prefix, i);
  return buf;
}

std::string read_text(const fs::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& path, std::string_view header) {
  const auto lines = split(read_text(path), '\n');
  if (lines.empty() || lines[0] != header) {
    throw std::invalid_argument(path.string() + ": expected header '" + std::string(header) + "'");
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    rows.push_back(split(lines[i], ','));
  }
  return rows;
}

constexpr std::string_view kFramesHeader = "index,timestamp,is_keyframe";
constexpr std::string_view kTracksHeader = "cx,cy,cz,hx,hy,hz,vx,vy,vz,label";

}  // namespace

fs::path sequence_dir(const fs::path& dir, std::size_t index) { return dir / numbered("seq", index); }

void write_dataset(const fs::path& dir, const RunConfig& config, std::span<const synth::SequenceData> sequences) {
  fs::create_directories(dir);
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const auto& seq = sequences[s];
    const fs::path sdir = sequence_dir(dir, s);
    fs::create_directories(sdir);
    std::ostringstream frames;
    frames << kFramesHeader << '\n';
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
      const auto& frame = seq.frames[f];
      frames << f << ',' << format_real(frame.timestamp) << ',' << (frame.is_keyframe ? 1 : 0) << '\n';
      const fs::path fdir = sdir / numbered("frame", f);
      fs::create_directories(fdir);
      write_file_atomic(fdir / "pose.uops", io::encode_pose(frame.ego_pose));
      write_file_atomic(fdir / "lidar.uopc", io::encode_point_cloud(frame.point_cloud));
      for (std::size_t k = 0; k < frame.images.size(); ++k) {
        write_file_atomic(fdir / ("cam_" + std::to_string(k) + ".uoir"), io::encode_raster(frame.images[k]));
      }
    }
    write_file_atomic(sdir / "frames.csv", frames.str());
    std::ostringstream tracks;
    tracks << kTracksHeader << '\n';
    for (const auto& t : seq.tracks) {
      for (const Vec3* v : {&t.center, &t.half_extents, &t.velocity}) {
        tracks << format_real(v->x) << ',' << format_real(v->y) << ',' << format_real(v->z) << ',';
      }
      tracks << static_cast<int>(t.label) << '\n';
    }
    write_file_atomic(sdir / "tracks.csv", tracks.str());
  }
  // Written last so a directory with config.txt is complete.
  write_file_atomic(dir / "config.txt", config.canonical_text());
}

StoredDataset read_dataset(const fs::path& dir) {
  if (!fs::exists(dir / "config.txt")) throw std::invalid_argument(dir.string() + ": not a dataset (no config.txt)");
  StoredDataset out;
  out.config = parse_run_config(read_text(dir / "config.txt"));
  const auto rig = out.config.rig.build();
  for (int s = 0; s < out.config.num_sequences; ++s) {
    const fs::path sdir = sequence_dir(dir, static_cast<std::size_t>(s));
    synth::SequenceData seq;
    for (const auto& row : csv_rows(sdir / "tracks.csv", kTracksHeader)) {
      if (row.size() != 10) throw std::invalid_argument((sdir / "tracks.csv").string() + ": expected 10 columns");
      BoxTrack t;
      t.center = {parse_real(row[0]), parse_real(row[1]), parse_real(row[2])};
      t.half_extents = {parse_real(row[3]), parse_real(row[4]), parse_real(row[5])};
      t.velocity = {parse_real(row[6]), parse_real(row[7]), parse_real(row[8])};
      const long long label = parse_int(row[9]);
      if (label < 0 || label >= kNumClasses) throw std::invalid_argument("tracks.csv: class id out of range");
      t.label = static_cast<ClassId>(label);
      seq.tracks.push_back(t);
    }
    const auto rows = csv_rows(sdir / "frames.csv", kFramesHeader);
    for (std::size_t f = 0; f < rows.size(); ++f) {
      const auto& row = rows[f];
      if (row.size() != 3 || parse_int(row[0]) != static_cast<long long>(f)) {
        throw std::invalid_argument((sdir / "frames.csv").string() + ": bad row " + std::to_string(f + 1));
      }
      synth::MultiCameraFrame frame;
      frame.timestamp = parse_real(row[1]);
      frame.is_keyframe = parse_int(row[2]) != 0;
      frame.rig = rig;
      const fs::path fdir = sdir / numbered("frame", f);
      frame.ego_pose = io::decode_pose(read_file(fdir / "pose.uops"));
      frame.point_cloud = io::decode_point_cloud(read_file(fdir / "lidar.uopc"), FrameTag::ego(frame.timestamp));
      for (std::size_t k = 0; k < rig.size(); ++k) {
        frame.images.push_back(io::decode_raster(read_file(fdir / ("cam_" + std::to_string(k) + ".uoir"))));
      }
      seq.frames.push_back(std::move(frame));
    }
    out.sequences.push_back(std::move(seq));
  }
  return out;
}

}  // namespace uniscene::cli
