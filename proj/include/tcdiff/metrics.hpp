// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>

#include "tcdiff/grid.hpp"

namespace tcdiff {

/// Returned by psnr() for identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

double mean_squared_error(const RealImage& reference, const RealImage& reconstruction);

/// 10 log10(peak^2 / MSE) in dB.
double psnr(const RealImage& reference, const RealImage& reconstruction, double peak);

struct SsimParams {
  int window = 7;  // uniform window
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean SSIM over every fully contained window position. Local statistics use
/// population (1/n) normalization.
double ssim(const RealImage& reference, const RealImage& reconstruction, double peak,
            const SsimParams& params = {});

/// Maximum value of an image; the default PSNR/SSIM peak.
double peak_value(const RealImage& image);

}  // namespace tcdiff
