// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tcdiff/errors.hpp"

namespace tcdiff {

using Complex = std::complex<double>;

struct ImageDomain {};
struct FrequencyDomain {};

/// Row-major H x W complex array tagged with the domain it lives in, so an
/// image and a K-space grid cannot be mixed up by accident.
///
/// K-space grids are always stored centered: the DC coefficient sits at
/// (H/2, W/2) (integer division).
template <typename Domain>
class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(std::size_t height, std::size_t width)
      : height_(height), width_(width), values_(height * width) {}
  ComplexGrid(std::size_t height, std::size_t width, std::vector<Complex> values)
      : height_(height), width_(width), values_(std::move(values)) {
    if (values_.size() != height_ * width_)
      throw ArgumentError("grid value count " + std::to_string(values_.size()) +
                          " does not match " + std::to_string(height_) + "x" +
                          std::to_string(width_));
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  Complex& operator()(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return values_[row * width_ + col];
  }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  std::span<Complex> values() & { return values_; }
  std::span<const Complex> values() const& { return values_; }
  // A span into a temporary grid dangles once the statement ends.
  void values() && = delete;

  bool same_shape(const ComplexGrid& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const ComplexGrid&, const ComplexGrid&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<Complex> values_;
};

using ComplexImage = ComplexGrid<ImageDomain>;
using KSpaceGrid = ComplexGrid<FrequencyDomain>;

/// Real-valued H x W image, used for metrics, phantoms and PNG output.
struct RealImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  RealImage() = default;
  RealImage(std::size_t h, std::size_t w) : height(h), width(w), values(h * w, 0.0) {}

  double& operator()(std::size_t row, std::size_t col) { return values[row * width + col]; }
  double operator()(std::size_t row, std::size_t col) const { return values[row * width + col]; }
};

ComplexImage to_complex(const RealImage& img);
RealImage magnitude(const ComplexImage& img);
RealImage real_part(const ComplexImage& img);

double l2_norm(std::span<const Complex> values);
double max_abs(std::span<const Complex> values);
bool all_finite(std::span<const Complex> values);

template <typename Domain>
void require_same_shape(const ComplexGrid<Domain>& a, const ComplexGrid<Domain>& b,
                        const char* what) {
  if (!a.same_shape(b))
    throw ArgumentError(std::string(what) + ": shape mismatch " + std::to_string(a.height()) +
                        "x" + std::to_string(a.width()) + " vs " + std::to_string(b.height()) +
                        "x" + std::to_string(b.width()));
}

}  // namespace tcdiff
