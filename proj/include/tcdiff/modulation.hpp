// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <vector>

#include "tcdiff/feature_map.hpp"

namespace tcdiff {

struct BlockModulation {
  double backbone = 1.2;  // b_l
  double skip = 0.9;      // s_l
  double radius = 1.0;    // r_thresh, frequency-index units
};

/// Per-decoder-block feature-coordination factors. Block 0 is the coarsest
/// decoder block. Blocks outside `affected` run unmodulated.
struct ModulationConfig {
  std::vector<BlockModulation> blocks;
  std::set<int> affected;

  /// Defaults on every block, applied to the two coarsest.
  static ModulationConfig defaults(int decoder_blocks);
  /// b = 1, s = 1 on every block: mathematically a no-op.
  static ModulationConfig identity(int decoder_blocks);

  bool applies_to(int block) const { return affected.contains(block); }
  void validate(int decoder_blocks) const;
};

/// Spatial amplification map (batch x 1 x H x W) from the channel-mean map
/// xbar: alpha = (b - 1) (xbar - min xbar) / (max xbar - min xbar) + 1, with
/// min/max over positions of each batch item. A flat xbar
/// (max - min < 1e-12) gives alpha = 1.
FeatureMap backbone_factor(const FeatureMap& backbone, double b);

/// Multiplies the first floor(C/2) channels by alpha; the rest are copied.
FeatureMap scale_backbone(const FeatureMap& backbone, const FeatureMap& alpha);

/// Per channel: scales centered Fourier coefficients within radius r_thresh
/// of DC by s and transforms back. Throws NumericalError if the discarded
/// imaginary residue exceeds 1e-9 of the signal norm.
FeatureMap spectral_modulate_skip(const FeatureMap& skip, double s, double r_thresh);

}  // namespace tcdiff
