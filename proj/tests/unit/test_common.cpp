// SPDX-License-Identifier: Apache-2.0
#include <set>

#include "doctest.h"
#include "uniscene/common/binary_io.hpp"
#include "uniscene/common/digest.hpp"
#include "uniscene/common/rng.hpp"
#include "uniscene/common/text.hpp"

using namespace uniscene;

TEST_CASE("rng is reproducible and streams are independent") {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, "data") == derive_seed(1, "data"));
  CHECK(derive_seed(1, "data") != derive_seed(1, "train"));
  CHECK(derive_seed(1, "data") != derive_seed(2, "data"));
}

TEST_CASE("uniform draws stay in range") {
  Rng r(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7u);
  }
}

TEST_CASE("permutation covers every index once") {
  Rng r(3);
  auto p = r.permutation(50);
  std::set<std::size_t> seen(p.begin(), p.end());
  CHECK(seen.size() == 50);
  CHECK(*seen.rbegin() == 49);
}

TEST_CASE("sha1 and git blob ids match known values") {
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(git_blob_digest({}) == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  const std::string hello = "hello\n";
  CHECK(git_blob_digest(Bytes(hello.begin(), hello.end())) == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("byte writer and reader agree") {
  ByteWriter w;
  w.magic("TEST");
  w.u8(7);
  w.u16(0x1234);
  w.u32(0xdeadbeef);
  w.u64(1ull << 40);
  w.f32(1.5f);
  w.f64(-2.25);
  const Bytes bytes = w.bytes();
  CHECK(bytes[5] == 0x34);  // little endian
  ByteReader r(bytes);
  r.expect_magic("TEST");
  CHECK(r.u8() == 7);
  CHECK(r.u16() == 0x1234);
  CHECK(r.u32() == 0xdeadbeef);
  CHECK(r.u64() == (1ull << 40));
  CHECK(r.f32() == 1.5f);
  CHECK(r.f64() == -2.25);
  CHECK_NOTHROW(r.expect_end());
}

TEST_CASE("reader reports the failing offset") {
  const Bytes bytes{'U', 'O', 'P', 'C', 1, 0};
  ByteReader r(bytes);
  r.expect_magic("UOPC");
  try {
    r.u32();
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 4);
  }
  ByteReader wrong(bytes);
  CHECK_THROWS_AS(wrong.expect_magic("UOPS"), FormatError);
}

TEST_CASE("strict number parsing") {
  CHECK(parse_real(" 0.25 ") == 0.25);
  CHECK(parse_int("-12") == -12);
  CHECK_THROWS(parse_real("1.0x"));
  CHECK_THROWS(parse_int("3.5"));
  CHECK_THROWS(parse_int(""));
  CHECK(parse_real(format_real(0.1)) == 0.1);
  CHECK(split("a,b,,c", ',').size() == 4);
  CHECK(trim("  x y\t") == "x y");
}
