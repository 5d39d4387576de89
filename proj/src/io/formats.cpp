// SPDX-License-Identifier: Apache-2.0
#include "uniscene/io/formats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uniscene::io {

namespace {

constexpr std::uint32_t kVersion = 1;

void expect_version(ByteReader& r) {
  const std::size_t at = r.offset();
  const std::uint32_t v = r.u32();
  if (v != kVersion) throw FormatError(at, "version 1, found " + std::to_string(v));
}

void write_grid_header(ByteWriter& w, const VoxelGridSpec& spec) {
  for (int d : spec.dims) w.u32(static_cast<std::uint32_t>(d));
  w.f32(static_cast<float>(spec.origin.x));
  w.f32(static_cast<float>(spec.origin.y));
  w.f32(static_cast<float>(spec.origin.z));
  for (double s : spec.voxel_size) w.f32(static_cast<float>(s));
}

VoxelGridSpec read_grid_header(ByteReader& r) {
  const std::size_t at = r.offset();
  VoxelGridSpec spec;
  for (auto& d : spec.dims) {
    const std::uint32_t v = r.u32();
    if (v == 0 || v > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
      throw FormatError(r.offset() - 4, "positive grid dimension");
    }
    d = static_cast<int>(v);
  }
  const double x = r.f32(), y = r.f32(), z = r.f32();
  spec.origin = {x, y, z};
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) throw FormatError(r.offset() - 12, "finite origin");
  for (auto& s : spec.voxel_size) {
    s = r.f32();
    if (!(s > 0.0) || !std::isfinite(s)) throw FormatError(r.offset() - 4, "positive voxel size");
  }
  // Guard against headers that promise more cells than any file could hold.
  if (spec.cell_count() > (std::size_t{1} << 40)) throw FormatError(at, "grid of plausible size");
  return spec;
}

}  // namespace

Bytes encode_point_cloud(const PointCloud& cloud) {
  ByteWriter w;
  w.magic("UOPC");
  w.u32(kVersion);
  w.u64(cloud.points.size());
  for (const auto& p : cloud.points) {
    w.f32(static_cast<float>(p.position.x));
    w.f32(static_cast<float>(p.position.y));
    w.f32(static_cast<float>(p.position.z));
    w.u8(p.label);
    w.u8(p.dynamic ? 1 : 0);
    w.u8(0);
    w.u8(0);
  }
  return w.take();
}

PointCloud decode_point_cloud(const Bytes& bytes, FrameTag frame) {
  ByteReader r(bytes);
  r.expect_magic("UOPC");
  expect_version(r);
  const std::uint64_t count = r.u64();
  if (count > r.remaining() / 16) r.fail(std::to_string(count) + " points of 16 bytes");
  PointCloud cloud;
  cloud.frame = frame;
  cloud.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    LabeledPoint p;
    const double x = r.f32(), y = r.f32(), z = r.f32();
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) throw FormatError(r.offset() - 12, "finite position");
    p.position = {x, y, z};
    p.label = r.u8();
    if (p.label >= kNumClasses) throw FormatError(r.offset() - 1, "class id below " + std::to_string(kNumClasses));
    const std::uint8_t dyn = r.u8();
    if (dyn > 1) throw FormatError(r.offset() - 1, "dynamic flag 0 or 1");
    p.dynamic = dyn == 1;
    for (int pad = 0; pad < 2; ++pad) {
      if (r.u8() != 0) throw FormatError(r.offset() - 1, "zero padding");
    }
    cloud.points.push_back(p);
  }
  r.expect_end();
  return cloud;
}

Bytes encode_pose(const SE3Pose& pose) {
  ByteWriter w;
  w.magic("UOPS");
  w.u32(kVersion);
  for (double v : pose.rotation().m) w.f64(v);
  w.f64(pose.translation().x);
  w.f64(pose.translation().y);
  w.f64(pose.translation().z);
  return w.take();
}

SE3Pose decode_pose(const Bytes& bytes) {
  ByteReader r(bytes);
  r.expect_magic("UOPS");
  expect_version(r);
  const std::size_t at = r.offset();
  Mat3 rot;
  for (auto& v : rot.m) v = r.f64();
  Vec3 t;
  t.x = r.f64();
  t.y = r.f64();
  t.z = r.f64();
  r.expect_end();
  try {
    return SE3Pose(rot, t);
  } catch (const std::invalid_argument&) {
    throw FormatError(at, "orthonormal rotation with determinant +1");
  }
}

Bytes encode_occupancy(const OccupancyGrid& grid) {
  if (grid.data.size() != grid.spec.cell_count()) throw std::invalid_argument("encode_occupancy: data size mismatch");
  ByteWriter w;
  w.magic("UOOG");
  w.u32(kVersion);
  write_grid_header(w, grid.spec);
  Bytes bits((grid.data.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < grid.data.size(); ++i) {
    if (grid.data[i]) bits[i / 8] = static_cast<std::uint8_t>(bits[i / 8] | (1u << (i % 8)));
  }
  w.raw(bits.data(), bits.size());
  return w.take();
}

OccupancyGrid decode_occupancy(const Bytes& bytes) {
  ByteReader r(bytes);
  r.expect_magic("UOOG");
  expect_version(r);
  OccupancyGrid grid(read_grid_header(r));
  const std::size_t n = grid.data.size();
  if ((n + 7) / 8 > r.remaining()) r.fail(std::to_string((n + 7) / 8) + " bytes of occupancy bits");
  for (std::size_t byte = 0; byte < (n + 7) / 8; ++byte) {
    const std::uint8_t b = r.u8();
    for (std::size_t bit = 0; bit < 8; ++bit) {
      const std::size_t i = byte * 8 + bit;
      const bool set = (b >> bit) & 1u;
      if (i < n) {
        grid.data[i] = set ? 1 : 0;
      } else if (set) {
        throw FormatError(r.offset() - 1, "zero padding bits after the last cell");
      }
    }
  }
  r.expect_end();
  return grid;
}

Bytes encode_semantic(const SemanticGrid& grid) {
  if (grid.data.size() != grid.spec.cell_count()) throw std::invalid_argument("encode_semantic: data size mismatch");
  ByteWriter w;
  w.magic("UOSG");
  w.u32(kVersion);
  write_grid_header(w, grid.spec);
  w.raw(grid.data.data(), grid.data.size());
  return w.take();
}

SemanticGrid decode_semantic(const Bytes& bytes) {
  ByteReader r(bytes);
  r.expect_magic("UOSG");
  expect_version(r);
  SemanticGrid grid(read_grid_header(r));
  if (grid.data.size() > r.remaining()) r.fail(std::to_string(grid.data.size()) + " class-id bytes");
  for (auto& c : grid.data) {
    c = r.u8();
    if (c >= kNumClasses) throw FormatError(r.offset() - 1, "class id below " + std::to_string(kNumClasses));
  }
  r.expect_end();
  return grid;
}

Bytes encode_raster(const Raster& raster) {
  if (raster.data.size() != static_cast<std::size_t>(raster.channels) * static_cast<std::size_t>(raster.height) *
                                static_cast<std::size_t>(raster.width)) {
    throw std::invalid_argument("encode_raster: data size mismatch");
  }
  ByteWriter w;
  w.magic("UOIR");
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(raster.channels));
  w.u32(static_cast<std::uint32_t>(raster.height));
  w.u32(static_cast<std::uint32_t>(raster.width));
  for (double v : raster.data) w.f32(static_cast<float>(v));
  return w.take();
}

Raster decode_raster(const Bytes& bytes) {
  ByteReader r(bytes);
  r.expect_magic("UOIR");
  expect_version(r);
  std::uint32_t dims[3];
  for (auto& d : dims) {
    d = r.u32();
    if (d == 0 || d > 1u << 20) throw FormatError(r.offset() - 4, "raster dimension in [1, 2^20]");
  }
  const std::uint64_t n = std::uint64_t{dims[0]} * dims[1] * dims[2];
  if (n > r.remaining() / 4) r.fail(std::to_string(n) + " f32 raster values");
  Raster raster(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]));
  for (auto& v : raster.data) {
    v = r.f32();
    if (!std::isfinite(v)) throw FormatError(r.offset() - 4, "finite raster value");
  }
  r.expect_end();
  return raster;
}

std::string sniff_magic(const Bytes& bytes) {
  if (bytes.size() < 4) return {};
  return std::string(bytes.begin(), bytes.begin() + 4);
}

}  // namespace uniscene::io
