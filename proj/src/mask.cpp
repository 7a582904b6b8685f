// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/mask.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tcdiff/fft.hpp"
#include "tcdiff/rng.hpp"

namespace tcdiff {

SamplingMask::SamplingMask(std::size_t height, std::vector<std::uint8_t> columns,
                           double acceleration, double center_fraction)
    : height_(height),
      columns_(std::move(columns)),
      acceleration_(acceleration),
      center_fraction_(center_fraction) {
  if (height_ == 0 || columns_.empty()) throw ArgumentError("mask: zero-sized mask");
  for (auto& c : columns_) {
    if (c > 1) throw ArgumentError("mask: column flags must be 0 or 1");
  }
}

SamplingMask SamplingMask::full(std::size_t height, std::size_t width) {
  return SamplingMask(height, std::vector<std::uint8_t>(width, 1), 1.0, 1.0);
}

SamplingMask SamplingMask::empty(std::size_t height, std::size_t width) {
  return SamplingMask(height, std::vector<std::uint8_t>(width, 0),
                      std::numeric_limits<double>::infinity(), 0.0);
}

std::size_t SamplingMask::sampled_columns() const {
  return static_cast<std::size_t>(std::count(columns_.begin(), columns_.end(), 1));
}

double SamplingMask::sampled_fraction() const {
  return static_cast<double>(sampled_columns()) / static_cast<double>(width());
}

std::size_t center_column_count(std::size_t width, double center_fraction) {
  // The epsilon keeps e.g. 1.0 * 320 from flooring to 319.
  return std::min(width, static_cast<std::size_t>(
                             std::floor(center_fraction * static_cast<double>(width) + 1e-9)));
}

double default_center_fraction(double acceleration) {
  const double cf = 0.08 - 0.01 * (acceleration - 4.0);
  return std::clamp(cf, 0.04, 0.08);
}

SamplingMask make_mask(std::size_t height, std::size_t width, double acceleration,
                       double center_fraction, std::uint64_t seed) {
  if (height == 0 || width == 0) throw ArgumentError("make_mask: zero-sized mask");
  if (!(acceleration >= 1.0) || !std::isfinite(acceleration))
    throw ArgumentError("make_mask: acceleration must be >= 1");
  if (!(center_fraction >= 0.0 && center_fraction <= 1.0))
    throw ArgumentError("make_mask: center_fraction must lie in [0, 1]");
  if (center_fraction > 1.0 / acceleration + 1e-12) {
    std::ostringstream msg;
    msg << "make_mask: center_fraction " << center_fraction
        << " exceeds the sampled fraction 1/acceleration = " << 1.0 / acceleration
        << "; the center alone would oversample";
    throw ArgumentError(msg.str());
  }

  const std::size_t n_center = center_column_count(width, center_fraction);
  std::vector<std::uint8_t> columns(width, 0);

  if (n_center < width) {
    const double target = static_cast<double>(width) / acceleration;
    const double prob = std::clamp(
        (target - static_cast<double>(n_center)) / static_cast<double>(width - n_center), 0.0,
        1.0);
    RngStream rng(seed, StreamPurpose::kMask, 0);
    for (auto& c : columns) c = rng.uniform() < prob ? 1 : 0;
  }

  // Same placement as the fastMRI mask functions; always covers column w/2.
  const std::size_t pad = (width - n_center + 1) / 2;
  for (std::size_t j = pad; j < pad + n_center; ++j) columns[j] = 1;

  return SamplingMask(height, std::move(columns), acceleration, center_fraction);
}

KSpaceGrid apply_mask(const KSpaceGrid& k, const SamplingMask& mask) {
  if (k.height() != mask.height() || k.width() != mask.width())
    throw ArgumentError("apply_mask: shape mismatch");
  KSpaceGrid out(k.height(), k.width());
  for (std::size_t r = 0; r < k.height(); ++r)
    for (std::size_t c = 0; c < k.width(); ++c)
      out(r, c) = mask.sampled(r, c) ? k(r, c) : Complex{};
  return out;
}

ComplexImage zero_fill(const KSpaceGrid& k_under) { return ifft2c(k_under); }

}  // namespace tcdiff
