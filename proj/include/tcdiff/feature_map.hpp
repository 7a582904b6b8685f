// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "tcdiff/errors.hpp"
#include "tcdiff/grid.hpp"

namespace tcdiff {

/// Dense B x C x H x W real tensor, row-major (W fastest).
struct FeatureMap {
  std::size_t batch = 0;
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  FeatureMap() = default;
  FeatureMap(std::size_t b, std::size_t c, std::size_t h, std::size_t w)
      : batch(b), channels(c), height(h), width(w), values(b * c * h * w, 0.0) {}

  std::size_t plane() const { return height * width; }
  std::size_t offset(std::size_t b, std::size_t c) const {
    return (b * channels + c) * plane();
  }
  double& at(std::size_t b, std::size_t c, std::size_t y, std::size_t x) {
    return values[offset(b, c) + y * width + x];
  }
  double at(std::size_t b, std::size_t c, std::size_t y, std::size_t x) const {
    return values[offset(b, c) + y * width + x];
  }

  bool same_shape(const FeatureMap& o) const {
    return batch == o.batch && channels == o.channels && height == o.height && width == o.width;
  }
};

/// Complex image as a 1 x 2 x H x W tensor: channel 0 real, channel 1 imaginary.
FeatureMap to_channels(const ComplexImage& img);
ComplexImage from_channels(const FeatureMap& fm);

}  // namespace tcdiff
