// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uniscene {

using Bytes = std::vector<std::uint8_t>;

// The value a double takes after a trip through an f32 field. Kept out of line:
// g++ 11 at -O3 vectorizes the double->float->double pair in a loop and drops
// the rounding for some elements.
double round_to_f32(double v);

/// Malformed input file. Carries the byte offset at which parsing failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t offset, const std::string& expectation);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Appends little-endian encoded values.
class ByteWriter {
 public:
  void magic(std::string_view tag);
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void raw(const void* data, std::size_t n);

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

/// Sequential little-endian decoder with bounds checks.
class ByteReader {
 public:
  explicit ByteReader(const Bytes& data) : data_(data) {}

  void expect_magic(std::string_view tag);
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  std::string text(std::size_t n);

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  /// Throws unless every byte has been consumed.
  void expect_end() const;
  [[noreturn]] void fail(const std::string& expectation) const;

 private:
  void need(std::size_t n, const char* what) const;

  const Bytes& data_;
  std::size_t pos_ = 0;
};

Bytes read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const Bytes& data);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace uniscene
