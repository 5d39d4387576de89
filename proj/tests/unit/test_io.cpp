// SPDX-License-Identifier: Apache-2.0
#include <cstring>

#include "doctest.h"
#include "instances.hpp"

using namespace uniscene;
using namespace uniscene::io;

namespace {

std::size_t failure_offset(const std::function<void()>& decode) {
  try {
    decode();
  } catch (const FormatError& e) {
    return e.offset();
  }
  return static_cast<std::size_t>(-1);
}

void put_u32(Bytes& b, std::size_t at, std::uint32_t v) { std::memcpy(b.data() + at, &v, 4); }

}  // namespace

TEST_CASE("write-read-write is byte identical") {
  Rng rng(99);
  for (int i = 0; i < 10; ++i) {
    const Bytes pc = encode_point_cloud(instances::random_cloud(rng, rng.below(300)));
    CHECK(encode_point_cloud(decode_point_cloud(pc)) == pc);
    const Bytes pose = encode_pose(instances::random_pose(rng));
    CHECK(encode_pose(decode_pose(pose)) == pose);
    const Bytes og = encode_occupancy(instances::random_occupancy(rng));
    CHECK(encode_occupancy(decode_occupancy(og)) == og);
    const Bytes sg = encode_semantic(instances::random_semantic(rng));
    CHECK(encode_semantic(decode_semantic(sg)) == sg);
    const Bytes ir = encode_raster(instances::random_raster(rng));
    CHECK(encode_raster(decode_raster(ir)) == ir);
  }
  const Bytes ck = encode_checkpoint(instances::random_checkpoint(rng));
  CHECK(encode_checkpoint(decode_checkpoint(ck)) == ck);
}

TEST_CASE("layouts follow the documented byte order") {
  PointCloud c;
  c.points.push_back({{1.0, -2.0, 0.5}, kDynamicObject, true});
  const Bytes b = encode_point_cloud(c);
  REQUIRE(b.size() == 4 + 4 + 8 + 16);
  CHECK(sniff_magic(b) == "UOPC");
  CHECK(b[4] == 1);
  CHECK(b[8] == 1);
  float x;
  std::memcpy(&x, b.data() + 16, 4);
  CHECK(x == 1.0f);
  CHECK(b[28] == kDynamicObject);
  CHECK(b[29] == 1);
  CHECK(b[30] == 0);
  CHECK(b[31] == 0);

  const Bytes pose = encode_pose(SE3Pose::translation_only({1, 2, 3}));
  CHECK(pose.size() == 8 + 12 * 8);
  double tz;
  std::memcpy(&tz, pose.data() + 8 + 11 * 8, 8);
  CHECK(tz == 3.0);

  OccupancyGrid g(VoxelGridSpec{{0, 0, 0}, {1, 1, 1}, {1, 3, 3}});
  g.data[0] = 1;
  g.data[8] = 1;
  const Bytes ob = encode_occupancy(g);
  CHECK(ob.size() == 4 + 4 + 12 + 12 + 12 + 2);
  CHECK(ob[ob.size() - 2] == 0x01);
  CHECK(ob[ob.size() - 1] == 0x01);

  const Bytes ir = encode_raster(Raster(2, 3, 4));
  CHECK(ir.size() == 4 + 16 + 2 * 3 * 4 * 4);
  CHECK(sniff_magic(Bytes{'U', 'O'}) == "");
}

TEST_CASE("decoders reject malformed input at the right offset") {
  PointCloud c;
  c.points.push_back({{1, 2, 3}, kGround, false});
  const Bytes good = encode_point_cloud(c);

  Bytes bad = good;
  bad[0] = 'X';
  CHECK(failure_offset([&] { decode_point_cloud(bad); }) == 0);
  bad = good;
  put_u32(bad, 4, 2);
  CHECK(failure_offset([&] { decode_point_cloud(bad); }) == 4);
  bad = good;
  bad[28] = 9;
  CHECK(failure_offset([&] { decode_point_cloud(bad); }) == 28);
  bad = good;
  bad[29] = 2;
  CHECK(failure_offset([&] { decode_point_cloud(bad); }) == 29);
  bad = good;
  bad[31] = 1;
  CHECK(failure_offset([&] { decode_point_cloud(bad); }) == 31);
  bad = good;
  bad.push_back(0);
  CHECK(failure_offset([&] { decode_point_cloud(bad); }) == good.size());
  bad = Bytes(good.begin(), good.end() - 1);
  CHECK(failure_offset([&] { decode_point_cloud(bad); }) != static_cast<std::size_t>(-1));

  Bytes pose = encode_pose(SE3Pose::identity());
  const double two = 2.0;
  std::memcpy(pose.data() + 8, &two, 8);
  CHECK_THROWS_AS(decode_pose(pose), FormatError);

  OccupancyGrid g(VoxelGridSpec{{0, 0, 0}, {1, 1, 1}, {1, 1, 3}});
  Bytes ob = encode_occupancy(g);
  ob.back() = 0x80;  // bit beyond the third cell
  CHECK(failure_offset([&] { decode_occupancy(ob); }) == ob.size() - 1);

  SemanticGrid s(VoxelGridSpec{{0, 0, 0}, {1, 1, 1}, {1, 1, 3}});
  Bytes sb = encode_semantic(s);
  sb[sb.size() - 2] = 4;
  CHECK(failure_offset([&] { decode_semantic(sb); }) == sb.size() - 2);
  Bytes zero_dim = encode_semantic(s);
  put_u32(zero_dim, 8, 0);
  CHECK(failure_offset([&] { decode_semantic(zero_dim); }) == 8);
}
