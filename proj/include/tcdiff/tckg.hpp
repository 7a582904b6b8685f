// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tcdiff/denoiser.hpp"
#include "tcdiff/mask.hpp"
#include "tcdiff/schedule.hpp"

namespace tcdiff {

/// Texture-coordinated K-space guidance settings shared by all chains.
struct TckgParams {
  int repeats = 3;  // K
  const SamplingMask* mask = nullptr;
  const KSpaceGrid* observation = nullptr;  // x_obs, centered
  /// Project onto the clean observation instead of a noised copy. Used for
  /// the refinement pass after averaging.
  bool use_clean_observation = false;

  void validate() const;
};

/// x_obs + fft2c(eta), eta real image-domain noise with variance 1 - abar_t.
/// Step 0 (abar = 1) returns x_obs unchanged and draws nothing.
KSpaceGrid noise_observation(const KSpaceGrid& x_obs, int t, const NoiseSchedule& s,
                             NoiseSource& noise);

/// ifft2c((1 - M) fft2c(y') + M x_obs_t): sampled lines come from the
/// observation, the rest from the model output.
ComplexImage data_consistency(const ComplexImage& y_prime, const KSpaceGrid& x_obs_t,
                              const SamplingMask& mask);

/// Jump-forward noising from t_from to t_to > t_from:
///   sqrt(abar_to / abar_from) y + sqrt(1 - abar_to / abar_from) z.
ComplexImage renoise(const ComplexImage& y, int t_from, int t_to, const NoiseSchedule& s,
                     NoiseSource& noise);

/// One texture-coordinated step from t down to t_next. Repeats K times:
/// predict noise at t, reverse-transition to t_next, project onto the
/// (noised) observation, and, except on the last repeat, renoise back to t.
/// Draw order per repeat: transition noise, observation noise, renoise noise.
ComplexImage tc_step(const ComplexImage& y_t, int t, int t_next, const Denoiser& denoiser,
                     const TckgParams& params, const NoiseSchedule& s, NoiseSource& noise);

}  // namespace tcdiff
