// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tcdiff {

const std::array<Ellipse, 10>& shepp_logan_ellipses() {
  static const std::array<Ellipse, 10> ellipses{{
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  }};
  return ellipses;
}

RealImage shepp_logan(std::size_t height, std::size_t width) {
  if (height < 8 || width < 8) throw ArgumentError("shepp_logan: size must be at least 8x8");
  RealImage img(height, width);
  for (const auto& e : shepp_logan_ellipses()) {
    const double phi = e.angle_deg * std::numbers::pi / 180.0;
    const double cs = std::cos(phi), sn = std::sin(phi);
    for (std::size_t r = 0; r < height; ++r) {
      const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(height);
      for (std::size_t c = 0; c < width; ++c) {
        const double x = (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(width) - 1.0;
        const double dx = x - e.center_x, dy = y - e.center_y;
        const double u = dx * cs + dy * sn;
        const double v = -dx * sn + dy * cs;
        if ((u * u) / (e.semi_x * e.semi_x) + (v * v) / (e.semi_y * e.semi_y) <= 1.0)
          img(r, c) += e.intensity;
      }
    }
  }
  for (auto& v : img.values) v = std::clamp(v, 0.0, 1.0);
  return img;
}

}  // namespace tcdiff
