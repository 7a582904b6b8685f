// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tcdiff/denoiser.hpp"
#include "tcdiff/feature_map.hpp"
#include "tcdiff/modulation.hpp"
#include "tcdiff/weights.hpp"

namespace tcdiff {

// Reference architecture. Three resolution levels of widths 32/64/128, two
// residual blocks per level, 4-head self-attention in the middle block at the
// coarsest level, 128-wide sinusoidal time embedding, group norm with 8
// groups. Decoder block 0 is the coarsest.
namespace arch {
inline constexpr int kInChannels = 2;
inline constexpr int kLevels = 3;
inline constexpr int kBaseWidth = 32;
inline constexpr int kResBlocks = 2;
inline constexpr int kHeads = 4;
inline constexpr int kTimeDim = 128;
inline constexpr int kGroups = 8;
inline constexpr int kDecoderBlocks = kLevels;

int level_width(int level);
}  // namespace arch

/// Ordered tensor names and shapes of the reference architecture.
const std::vector<TensorSpec>& architecture_manifest();

/// Noise-prediction U-Net with optional backbone/skip feature modulation in
/// the decoder. Weights are converted once at construction; forward() is
/// const and allocates only locals, so one instance may serve many threads.
class MfUNet {
 public:
  explicit MfUNet(const WeightSet& weights);
  ~MfUNet();
  MfUNet(MfUNet&&) noexcept;
  MfUNet& operator=(MfUNet&&) noexcept;

  /// input: B x 2 x H x W with H, W divisible by 4. Without a config the
  /// plain U-Net runs.
  FeatureMap forward(const FeatureMap& input, double t,
                     const ModulationConfig* modulation = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FeatureMap unet_forward(const FeatureMap& input, double t, const WeightSet& weights,
                        const ModulationConfig* modulation);

/// Denoiser backed by MF-UNet. Complex images enter as 2-channel tensors.
class UNetDenoiser final : public Denoiser {
 public:
  UNetDenoiser(const WeightSet& weights, std::optional<ModulationConfig> modulation);
  ComplexImage predict_noise(const ComplexImage& y_t, int t) const override;

 private:
  MfUNet net_;
  std::optional<ModulationConfig> modulation_;
};

}  // namespace tcdiff
