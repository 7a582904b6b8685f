// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>

#include "tcdiff/grid.hpp"

namespace tcdiff {

struct Ellipse {
  double intensity;
  double semi_x;  // semi-axis along x before rotation
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;
};

/// The ten ellipses of the modified (contrast-enhanced) Shepp-Logan phantom
/// on the [-1, 1]^2 field of view.
const std::array<Ellipse, 10>& shepp_logan_ellipses();

/// Rasterizes the phantom by testing each pixel center for membership in
/// each ellipse. x runs left to right across columns, y runs bottom to top.
/// Values are clamped to [0, 1]. Requires h, w >= 8.
RealImage shepp_logan(std::size_t height, std::size_t width);

}  // namespace tcdiff
