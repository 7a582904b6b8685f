// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "tcdiff/denoiser.hpp"
#include "tcdiff/schedule.hpp"

namespace tcdiff {

/// Independent-pixel Gaussian prior x0 ~ N(mean, diag(stddev^2)).
struct GaussianPrior {
  ComplexImage mean;
  std::vector<double> stddev;  // one entry per pixel

  static GaussianPrior uniform(ComplexImage mean, double stddev);
};

/// Exact MMSE denoiser for data drawn from a GaussianPrior. For
/// y_t = sqrt(abar) x0 + sqrt(1 - abar) eps the posterior mean is affine:
///   E[x0 | y_t] = (sqrt(abar) s0^2 y_t + (1 - abar) mu) / (abar s0^2 + 1 - abar)
/// and the noise estimate follows as (y_t - sqrt(abar) E[x0|y_t]) / sqrt(1 - abar).
class GaussianDenoiser final : public Denoiser {
 public:
  GaussianDenoiser(GaussianPrior prior, NoiseSchedule schedule);

  ComplexImage predict_noise(const ComplexImage& y_t, int t) const override;
  ComplexImage posterior_mean(const ComplexImage& y_t, int t) const;

  const GaussianPrior& prior() const { return prior_; }

 private:
  GaussianPrior prior_;
  NoiseSchedule schedule_;
};

}  // namespace tcdiff
