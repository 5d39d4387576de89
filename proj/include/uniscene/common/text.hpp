// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace uniscene {

/// Shortest-round-trip-safe decimal form ("%.17g").
std::string format_real(double v);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Strict numeric parsing: the whole (trimmed) string must be consumed.
double parse_real(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace uniscene
