// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "uniscene/common/binary_io.hpp"

namespace uniscene {

/// Lowercase hex SHA-1 of `data`.
std::string sha1_hex(std::string_view data);

/// Git blob object id of `data` (SHA-1 over "blob <size>\0" + data).
std::string git_blob_digest(const Bytes& data);

}  // namespace uniscene
