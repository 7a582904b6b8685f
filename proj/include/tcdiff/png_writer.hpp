// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "tcdiff/grid.hpp"

namespace tcdiff {

/// 8-bit grayscale PNG of the image min-max normalized to [0, 255]. A
/// constant image is written as all zeros.
void write_png(const std::filesystem::path& path, const RealImage& image);

}  // namespace tcdiff
