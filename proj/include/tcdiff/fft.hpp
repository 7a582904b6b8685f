// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tcdiff/grid.hpp"

namespace tcdiff {

/// Centered, orthonormal 2-D DFT: ifftshift -> DFT -> fftshift, scaled by
/// 1/sqrt(H*W). Unitary, so noise variance is the same in both domains.
KSpaceGrid fft2c(const ComplexImage& img);

/// Exact inverse of fft2c.
ComplexImage ifft2c(const KSpaceGrid& k);

}  // namespace tcdiff
