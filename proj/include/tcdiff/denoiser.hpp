// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tcdiff/grid.hpp"

namespace tcdiff {

/// Noise-prediction model eps_hat(y_t, t). Implementations must be
/// deterministic and safe to call from several sampler chains at once.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual ComplexImage predict_noise(const ComplexImage& y_t, int t) const = 0;
};

}  // namespace tcdiff
