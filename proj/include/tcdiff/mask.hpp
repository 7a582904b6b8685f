// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tcdiff/grid.hpp"

namespace tcdiff {

/// Binary Cartesian undersampling mask. Sampling is per phase-encode column,
/// so only the W column flags are stored; every row is identical.
class SamplingMask {
 public:
  SamplingMask() = default;
  SamplingMask(std::size_t height, std::vector<std::uint8_t> columns, double acceleration,
               double center_fraction);

  static SamplingMask full(std::size_t height, std::size_t width);
  static SamplingMask empty(std::size_t height, std::size_t width);

  std::size_t height() const { return height_; }
  std::size_t width() const { return columns_.size(); }
  double acceleration() const { return acceleration_; }
  double center_fraction() const { return center_fraction_; }

  bool sampled(std::size_t /*row*/, std::size_t col) const { return columns_[col] != 0; }
  const std::vector<std::uint8_t>& columns() const { return columns_; }

  std::size_t sampled_columns() const;
  double sampled_fraction() const;

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

 private:
  std::size_t height_ = 0;
  std::vector<std::uint8_t> columns_;
  double acceleration_ = 1.0;
  double center_fraction_ = 1.0;
};

/// Number of fully sampled center columns for a given width.
std::size_t center_column_count(std::size_t width, double center_fraction);

/// Default center fraction: 0.08 at 4x, 0.04 at 8x, linear in between and
/// clamped outside that range.
double default_center_fraction(double acceleration);

/// Random Cartesian mask: the floor(center_fraction * w) columns around DC are
/// always kept; each remaining column is kept independently with probability
/// p = (w / acceleration - n_center) / (w - n_center), so the expected sampled
/// fraction is 1 / acceleration.
SamplingMask make_mask(std::size_t height, std::size_t width, double acceleration,
                       double center_fraction, std::uint64_t seed);

KSpaceGrid apply_mask(const KSpaceGrid& k, const SamplingMask& mask);

/// Zero-filled reconstruction: missing coefficients are taken as zero.
ComplexImage zero_fill(const KSpaceGrid& k_under);

}  // namespace tcdiff
