// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uniscene/common/binary_io.hpp"
#include "uniscene/occ/point_cloud.hpp"
#include "uniscene/occ/voxel_grid.hpp"
#include "uniscene/train/checkpoint.hpp"
#include "uniscene/view/raster.hpp"

// Little-endian on-disk layouts. Every decoder throws FormatError carrying
// the byte offset of the first unexpected field, and rejects trailing bytes.
//
//   UOPC  u32 version=1, u64 count, count x {f32 x, y, z; u8 label; u8 dynamic; u8 pad[2] = 0}
//   UOPS  u32 version=1, 12 x f64: rotation row-major, then translation
//   UOOG  u32 version=1, u32 D, H, W, f32 origin[3], f32 voxel_size[3],
//         ceil(DHW / 8) bytes; cell ((d * H) + h) * W + w is bit (i % 8) of byte i / 8
//   UOSG  same header as UOOG, then D * H * W class-id bytes
//   UOCK  see train/checkpoint.hpp
//   UOIR  u32 version=1, u32 channels, h, w, f32 data channel-major
namespace uniscene::io {

Bytes encode_point_cloud(const PointCloud& cloud);
/// Files carry no frame tag; the caller supplies it.
PointCloud decode_point_cloud(const Bytes& bytes, FrameTag frame = FrameTag::ego(0.0));

Bytes encode_pose(const SE3Pose& pose);
SE3Pose decode_pose(const Bytes& bytes);

Bytes encode_occupancy(const OccupancyGrid& grid);
OccupancyGrid decode_occupancy(const Bytes& bytes);

Bytes encode_semantic(const SemanticGrid& grid);
SemanticGrid decode_semantic(const Bytes& bytes);

Bytes encode_raster(const Raster& raster);
Raster decode_raster(const Bytes& bytes);

inline Bytes encode_checkpoint(const train::Checkpoint& ck) { return train::serialize_checkpoint(ck); }
inline train::Checkpoint decode_checkpoint(const Bytes& bytes) { return train::parse_checkpoint(bytes); }

/// The four-byte magic at the start of `bytes`, or "" if too short.
std::string sniff_magic(const Bytes& bytes);

}  // namespace uniscene::io
