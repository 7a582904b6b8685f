// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/grid.hpp"

#include <algorithm>
#include <cmath>

namespace tcdiff {

ComplexImage to_complex(const RealImage& img) {
  ComplexImage out(img.height, img.width);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex(img.values[i], 0.0);
  return out;
}

RealImage magnitude(const ComplexImage& img) {
  RealImage out(img.height(), img.width());
  for (std::size_t i = 0; i < img.size(); ++i) out.values[i] = std::abs(img[i]);
  return out;
}

RealImage real_part(const ComplexImage& img) {
  RealImage out(img.height(), img.width());
  for (std::size_t i = 0; i < img.size(); ++i) out.values[i] = img[i].real();
  return out;
}

double l2_norm(std::span<const Complex> values) {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return std::sqrt(sum);
}

double max_abs(std::span<const Complex> values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const Complex> values) {
  return std::all_of(values.begin(), values.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

}  // namespace tcdiff
