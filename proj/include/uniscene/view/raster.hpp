// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace uniscene {

/// Dense channel-major image (channels x height x width).
struct Raster {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Raster() = default;
  Raster(int c, int h, int w)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0.0) {}

  std::size_t index(int c, int i, int j) const {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height) + static_cast<std::size_t>(i)) *
               static_cast<std::size_t>(width) +
           static_cast<std::size_t>(j);
  }
  double at(int c, int i, int j) const { return data[index(c, i, j)]; }
  double& at(int c, int i, int j) { return data[index(c, i, j)]; }

  bool operator==(const Raster&) const = default;
};

}  // namespace uniscene
