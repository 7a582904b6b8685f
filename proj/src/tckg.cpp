// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/tckg.hpp"

#include <cmath>
#include <string>

#include "tcdiff/fft.hpp"

namespace tcdiff {

void TckgParams::validate() const {
  if (repeats < 1) throw ArgumentError("tckg: K (texture repeats) must be >= 1");
  if (!mask || !observation) throw ArgumentError("tckg: mask and observation are required");
  if (mask->height() != observation->height() || mask->width() != observation->width())
    throw ArgumentError("tckg: mask and observation shapes differ");
}

KSpaceGrid noise_observation(const KSpaceGrid& x_obs, int t, const NoiseSchedule& s,
                             NoiseSource& noise) {
  if (t < 0 || t > s.steps())
    throw ArgumentError("noise_observation: step " + std::to_string(t) + " out of range");
  const double variance = 1.0 - s.alpha_bar(t);
  if (variance <= 0.0) return x_obs;

  const double sd = std::sqrt(variance);
  ComplexImage eta(x_obs.height(), x_obs.width());
  for (auto& v : eta.values()) v = Complex(sd * noise.normal(), 0.0);
  const KSpaceGrid eta_k = fft2c(eta);

  KSpaceGrid out = x_obs;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += eta_k[i];
  return out;
}

ComplexImage data_consistency(const ComplexImage& y_prime, const KSpaceGrid& x_obs_t,
                              const SamplingMask& mask) {
  if (y_prime.height() != x_obs_t.height() || y_prime.width() != x_obs_t.width() ||
      mask.height() != x_obs_t.height() || mask.width() != x_obs_t.width())
    throw ArgumentError("data_consistency: shape mismatch");
  KSpaceGrid k = fft2c(y_prime);
  for (std::size_t r = 0; r < k.height(); ++r)
    for (std::size_t c = 0; c < k.width(); ++c)
      if (mask.sampled(r, c)) k(r, c) = x_obs_t(r, c);
  return ifft2c(k);
}

ComplexImage renoise(const ComplexImage& y, int t_from, int t_to, const NoiseSchedule& s,
                     NoiseSource& noise) {
  if (t_from < 0 || t_to <= t_from || t_to > s.steps())
    throw ArgumentError("renoise: need 0 <= t_from < t_to <= T, got " + std::to_string(t_from) +
                        " -> " + std::to_string(t_to));
  const double ratio = s.alpha_bar(t_to) / s.alpha_bar(t_from);
  const double keep = std::sqrt(ratio);
  const double sd = std::sqrt(1.0 - ratio);
  ComplexImage out(y.height(), y.width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = keep * y[i] + sd * noise.normal();
  return out;
}

ComplexImage tc_step(const ComplexImage& y_t, int t, int t_next, const Denoiser& denoiser,
                     const TckgParams& params, const NoiseSchedule& s, NoiseSource& noise) {
  params.validate();
  if (t_next >= t) throw ArgumentError("tc_step: need t_next < t");

  ComplexImage current = y_t;
  ComplexImage projected;
  for (int repeat = 0; repeat < params.repeats; ++repeat) {
    const ComplexImage eps_hat = denoiser.predict_noise(current, t);
    const ComplexImage y_prime = reverse_transition(current, eps_hat, t, t_next, s, noise);
    if (params.use_clean_observation) {
      projected = data_consistency(y_prime, *params.observation, *params.mask);
    } else {
      projected = data_consistency(
          y_prime, noise_observation(*params.observation, t_next, s, noise), *params.mask);
    }
    if (repeat + 1 < params.repeats) current = renoise(projected, t_next, t, s, noise);
  }
  return projected;
}

}  // namespace tcdiff
