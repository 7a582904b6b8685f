// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/oracle.hpp"

#include <cmath>

namespace tcdiff {

GaussianPrior GaussianPrior::uniform(ComplexImage mean, double stddev) {
  const std::size_t n = mean.size();
  return GaussianPrior{std::move(mean), std::vector<double>(n, stddev)};
}

GaussianDenoiser::GaussianDenoiser(GaussianPrior prior, NoiseSchedule schedule)
    : prior_(std::move(prior)), schedule_(std::move(schedule)) {
  if (prior_.stddev.size() != prior_.mean.size())
    throw ArgumentError("GaussianPrior: stddev must have one entry per pixel");
  for (double sd : prior_.stddev) {
    if (!(sd >= 0.0) || !std::isfinite(sd))
      throw ArgumentError("GaussianPrior: stddev must be finite and >= 0");
  }
  if (!all_finite(prior_.mean.values())) throw ArgumentError("GaussianPrior: non-finite mean");
}

ComplexImage GaussianDenoiser::posterior_mean(const ComplexImage& y_t, int t) const {
  require_same_shape(y_t, prior_.mean, "GaussianDenoiser");
  const double ab = schedule_.alpha_bar(t);
  if (!(1.0 - ab > 0.0))
    throw ArgumentError("GaussianDenoiser: undefined at a zero-noise step");
  const double sa = std::sqrt(ab);
  ComplexImage out(y_t.height(), y_t.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double var0 = prior_.stddev[i] * prior_.stddev[i];
    out[i] = (sa * var0 * y_t[i] + (1.0 - ab) * prior_.mean[i]) / (ab * var0 + (1.0 - ab));
  }
  return out;
}

ComplexImage GaussianDenoiser::predict_noise(const ComplexImage& y_t, int t) const {
  const ComplexImage x0 = posterior_mean(y_t, t);
  const double ab = schedule_.alpha_bar(t);
  const double sa = std::sqrt(ab);
  const double sb = std::sqrt(1.0 - ab);
  ComplexImage eps(y_t.height(), y_t.width());
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = (y_t[i] - sa * x0[i]) / sb;
  return eps;
}

}  // namespace tcdiff
