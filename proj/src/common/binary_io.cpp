// SPDX-License-Identifier: Apache-2.0
#include "uniscene/common/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace uniscene {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

FormatError::FormatError(std::size_t offset, const std::string& expectation)
    : std::runtime_error("at byte " + std::to_string(offset) + ": expected " + expectation),
      offset_(offset) {}

void ByteWriter::magic(std::string_view tag) { raw(tag.data(), tag.size()); }
void ByteWriter::u16(std::uint16_t v) { raw(&v, sizeof v); }
void ByteWriter::u32(std::uint32_t v) { raw(&v, sizeof v); }
void ByteWriter::u64(std::uint64_t v) { raw(&v, sizeof v); }
double round_to_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

void ByteWriter::f32(float v) { raw(&v, sizeof v); }
void ByteWriter::f64(double v) { raw(&v, sizeof v); }

void ByteWriter::raw(const void* data, std::size_t n) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  out_.insert(out_.end(), p, p + n);
}

void ByteReader::need(std::size_t n, const char* what) const {
  if (remaining() < n) fail(std::string(what) + " (" + std::to_string(n) + " bytes), found end of data");
}

void ByteReader::fail(const std::string& expectation) const { throw FormatError(pos_, expectation); }

void ByteReader::expect_magic(std::string_view tag) {
  need(tag.size(), "magic");
  if (std::memcmp(data_.data() + pos_, tag.data(), tag.size()) != 0) {
    fail("magic \"" + std::string(tag) + "\"");
  }
  pos_ += tag.size();
}

#define UNISCENE_READ_SCALAR(T, what)                 \
  need(sizeof(T), what);                              \
  T v;                                                \
  std::memcpy(&v, data_.data() + pos_, sizeof(T));    \
  pos_ += sizeof(T);                                  \
  return v

std::uint8_t ByteReader::u8() { UNISCENE_READ_SCALAR(std::uint8_t, "u8"); }
std::uint16_t ByteReader::u16() { UNISCENE_READ_SCALAR(std::uint16_t, "u16"); }
std::uint32_t ByteReader::u32() { UNISCENE_READ_SCALAR(std::uint32_t, "u32"); }
std::uint64_t ByteReader::u64() { UNISCENE_READ_SCALAR(std::uint64_t, "u64"); }
float ByteReader::f32() { UNISCENE_READ_SCALAR(float, "f32"); }
double ByteReader::f64() { UNISCENE_READ_SCALAR(double, "f64"); }

#undef UNISCENE_READ_SCALAR

std::string ByteReader::text(std::size_t n) {
  need(n, "text");
  std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
  pos_ += n;
  return s;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) fail("end of data, found " + std::to_string(remaining()) + " trailing bytes");
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path, const Bytes& data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, Bytes(text.begin(), text.end()));
}

}  // namespace uniscene
