// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace tcdiff {

namespace {

void check_pair(const RealImage& a, const RealImage& b, const char* what) {
  if (a.height != b.height || a.width != b.width)
    throw ArgumentError(std::string(what) + ": image shapes differ");
  if (a.values.empty()) throw ArgumentError(std::string(what) + ": empty image");
}

}  // namespace

double mean_squared_error(const RealImage& reference, const RealImage& reconstruction) {
  check_pair(reference, reconstruction, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < reference.values.size(); ++i) {
    const double d = reference.values[i] - reconstruction.values[i];
    sum += d * d;
  }
  return sum / static_cast<double>(reference.values.size());
}

double psnr(const RealImage& reference, const RealImage& reconstruction, double peak) {
  if (!(peak > 0.0)) throw ArgumentError("psnr: peak must be > 0");
  const double mse = mean_squared_error(reference, reconstruction);
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const RealImage& reference, const RealImage& reconstruction, double peak,
            const SsimParams& params) {
  check_pair(reference, reconstruction, "ssim");
  const auto win = static_cast<std::size_t>(params.window);
  if (params.window < 1 || reference.height < win || reference.width < win)
    throw ArgumentError("ssim: image smaller than the " + std::to_string(params.window) + "x" +
                        std::to_string(params.window) + " window");
  const double c1 = (params.k1 * peak) * (params.k1 * peak);
  const double c2 = (params.k2 * peak) * (params.k2 * peak);
  const double n = static_cast<double>(win * win);

  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r0 = 0; r0 + win <= reference.height; ++r0) {
    for (std::size_t c0 = 0; c0 + win <= reference.width; ++c0) {
      double mx = 0.0, my = 0.0;
      for (std::size_t r = r0; r < r0 + win; ++r)
        for (std::size_t c = c0; c < c0 + win; ++c) {
          mx += reference(r, c);
          my += reconstruction(r, c);
        }
      mx /= n;
      my /= n;
      double vx = 0.0, vy = 0.0, cxy = 0.0;
      for (std::size_t r = r0; r < r0 + win; ++r)
        for (std::size_t c = c0; c < c0 + win; ++c) {
          const double dx = reference(r, c) - mx;
          const double dy = reconstruction(r, c) - my;
          vx += dx * dx;
          vy += dy * dy;
          cxy += dx * dy;
        }
      vx /= n;
      vy /= n;
      cxy /= n;
      total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

double peak_value(const RealImage& image) {
  if (image.values.empty()) throw ArgumentError("peak_value: empty image");
  return *std::max_element(image.values.begin(), image.values.end());
}

}  // namespace tcdiff
