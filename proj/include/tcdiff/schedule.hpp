// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "tcdiff/grid.hpp"
#include "tcdiff/rng.hpp"

namespace tcdiff {

/// DDPM noise schedule with 1-based steps t = 1..T. alpha_bar(0) is defined
/// as 1 (the clean signal) so stride-aware transitions can land on step 0.
class NoiseSchedule {
 public:
  /// Linear beta ramp from beta_min (t = 1) to beta_max (t = T).
  static NoiseSchedule linear(int steps, double beta_min, double beta_max);

  /// Linear ramp with the 1000-step DDPM endpoints (1e-4, 0.02) scaled by
  /// 1000 / T, so total noising matches the 1000-step schedule.
  static NoiseSchedule scaled_linear(int steps);

  /// Arbitrary betas, mainly for tests. Each must lie in [0, 1).
  static NoiseSchedule from_betas(std::vector<double> betas);

  int steps() const { return static_cast<int>(beta_.size()); }
  double beta(int t) const { return beta_[index(t)]; }
  double alpha(int t) const { return 1.0 - beta(t); }
  double alpha_bar(int t) const;

  /// Variance of the DDPM posterior q(x_{t_next} | x_t, x_0) for a jump from
  /// t down to t_next < t. Zero when t_next == 0.
  double posterior_variance(int t, int t_next) const;

 private:
  explicit NoiseSchedule(std::vector<double> betas);
  std::size_t index(int t) const;

  std::vector<double> beta_;
  std::vector<double> alpha_bar_;
};

/// Default 1000-step-equivalent endpoints for a T-step schedule.
double default_beta_min(int steps);
double default_beta_max(int steps);

/// sqrt(abar_t) * x0 + sqrt(1 - abar_t) * eps.
ComplexImage forward_noise(const ComplexImage& x0, int t, const ComplexImage& eps,
                           const NoiseSchedule& s);

/// Inverse of forward_noise for a given noise estimate.
ComplexImage predict_x0(const ComplexImage& y_t, const ComplexImage& eps_hat, int t,
                        const NoiseSchedule& s);

/// Ancestral update from t to t_next < t using the DDPM posterior with
/// abar_t and abar_{t_next}. Unit stride gives the textbook update
///   (y_t - beta_t / sqrt(1 - abar_t) * eps_hat) / sqrt(alpha_t) + sigma_t * z.
/// Noise is real-valued and omitted when t_next == 0.
ComplexImage reverse_transition(const ComplexImage& y_t, const ComplexImage& eps_hat, int t,
                                int t_next, const NoiseSchedule& s, NoiseSource& noise);

/// Unit-stride reverse step t -> t-1; deterministic at t = 1.
ComplexImage reverse_step(const ComplexImage& y_t, const ComplexImage& eps_hat, int t,
                          const NoiseSchedule& s, NoiseSource& noise);

/// Image of i.i.d. real standard-normal values (imaginary part zero).
ComplexImage real_normal_image(std::size_t height, std::size_t width, NoiseSource& noise);

}  // namespace tcdiff
