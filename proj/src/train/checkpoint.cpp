// SPDX-License-Identifier: Apache-2.0
#include "uniscene/train/checkpoint.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "uniscene/common/binary_io.hpp"
#include "uniscene/common/digest.hpp"
#include "uniscene/common/text.hpp"

namespace uniscene::train {

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

std::string provenance_text(const Provenance& p) {
  std::ostringstream out;
  out << "provenance.stage = " << to_string(p.stage) << '\n';
  out << "provenance.epoch = " << p.epoch << '\n';
  out << "provenance.parent = " << p.parent << '\n';
  out << "provenance.config_hash = " << p.config_hash << '\n';
  out << p.config_text;
  return out.str();
}

Provenance parse_provenance(const std::string& text, ByteReader& reader) {
  static constexpr const char* kKeys[] = {"provenance.stage", "provenance.epoch", "provenance.parent",
                                          "provenance.config_hash"};
  Provenance p;
  std::size_t pos = 0;
  std::string values[4];
  for (int i = 0; i < 4; ++i) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) reader.fail(std::string("provenance line '") + kKeys[i] + "'");
    const std::string_view line(text.data() + pos, nl - pos);
    const std::string prefix = std::string(kKeys[i]) + " = ";
    if (!line.starts_with(prefix)) reader.fail(std::string("provenance line '") + kKeys[i] + "'");
    values[i] = std::string(line.substr(prefix.size()));
    pos = nl + 1;
  }
  try {
    p.stage = parse_stage(values[0]);
    p.epoch = static_cast<int>(parse_int(values[1]));
  } catch (const std::invalid_argument& e) {
    reader.fail(std::string("valid provenance (") + e.what() + ")");
  }
  p.parent = values[2];
  p.config_hash = values[3];
  p.config_text = text.substr(pos);
  return p;
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kPretrained: return "pretrained";
    case Stage::kFinetuned: return "finetuned";
    case Stage::kScratch: return "scratch";
  }
  return "scratch";
}

Stage parse_stage(std::string_view text) {
  if (text == "pretrained") return Stage::kPretrained;
  if (text == "finetuned") return Stage::kFinetuned;
  if (text == "scratch") return Stage::kScratch;
  throw std::invalid_argument("unknown stage '" + std::string(text) + "'");
}

nn::ModelParams quantize_params(nn::ModelParams params) {
  for (auto& b : params.blocks()) {
    for (auto& v : b.values) v = round_to_f32(v);
  }
  return params;
}

Bytes serialize_checkpoint(const Checkpoint& ck) {
  ByteWriter w;
  w.magic("UOCK");
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(ck.params.blocks().size()));
  for (const auto& b : ck.params.blocks()) {
    if (b.name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw std::invalid_argument("checkpoint: tensor name too long");
    }
    w.u16(static_cast<std::uint16_t>(b.name.size()));
    w.raw(b.name.data(), b.name.size());
    w.u8(static_cast<std::uint8_t>(b.shape.size()));
    for (auto d : b.shape) w.u32(static_cast<std::uint32_t>(d));
    for (double v : b.values) w.f32(static_cast<float>(v));
  }
  const std::string text = provenance_text(ck.provenance);
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.raw(text.data(), text.size());
  return w.take();
}

Checkpoint parse_checkpoint(const Bytes& bytes) {
  ByteReader r(bytes);
  r.expect_magic("UOCK");
  if (r.u32() != kCheckpointVersion) r.fail("version 1");
  const std::uint32_t count = r.u32();
  Checkpoint ck;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t name_len = r.u16();
    std::string name = r.text(name_len);
    const std::uint8_t ndim = r.u8();
    nn::Shape shape(ndim);
    std::size_t n = 1;
    for (auto& d : shape) {
      d = r.u32();
      n *= d;
    }
    if (n * 4 > r.remaining()) r.fail(std::to_string(n) + " f32 values for tensor '" + name + "'");
    std::vector<double> values(n);
    for (auto& v : values) v = r.f32();
    if (ck.params.contains(name)) r.fail("unique tensor name, got duplicate '" + name + "'");
    ck.params.add(std::move(name), std::move(shape), std::move(values));
  }
  const std::uint32_t text_len = r.u32();
  const std::string text = r.text(text_len);
  ck.provenance = parse_provenance(text, r);
  r.expect_end();
  return ck;
}

std::string digest(const Checkpoint& ck) { return git_blob_digest(serialize_checkpoint(ck)); }

Checkpoint strip_decoder(const Checkpoint& ck) {
  Checkpoint out;
  out.provenance = ck.provenance;
  for (const auto& b : ck.params.blocks()) {
    if (nn::is_encoder_param(b.name)) out.params.add(b.name, b.shape, b.values);
  }
  return out;
}

}  // namespace uniscene::train
