// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/schedule.hpp"

#include <cmath>
#include <string>

namespace tcdiff {

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : beta_(std::move(betas)) {
  if (beta_.empty()) throw ArgumentError("schedule: need at least one step");
  alpha_bar_.resize(beta_.size());
  double prod = 1.0;
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    if (!(beta_[i] >= 0.0 && beta_[i] < 1.0))
      throw ArgumentError("schedule: beta must lie in [0, 1)");
    prod *= 1.0 - beta_[i];
    alpha_bar_[i] = prod;
  }
}

NoiseSchedule NoiseSchedule::linear(int steps, double beta_min, double beta_max) {
  if (steps < 1) throw ArgumentError("schedule: T must be >= 1");
  if (!(beta_min > 0.0 && beta_min <= beta_max && beta_max < 1.0))
    throw ArgumentError("schedule: need 0 < beta_min <= beta_max < 1");
  std::vector<double> betas(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    betas[static_cast<std::size_t>(i)] = beta_min + (beta_max - beta_min) * frac;
  }
  return NoiseSchedule(std::move(betas));
}

NoiseSchedule NoiseSchedule::scaled_linear(int steps) {
  if (steps < 1) throw ArgumentError("schedule: T must be >= 1");
  return linear(steps, default_beta_min(steps), default_beta_max(steps));
}

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) {
  return NoiseSchedule(std::move(betas));
}

double default_beta_min(int steps) { return 1e-4 * (1000.0 / steps); }
double default_beta_max(int steps) { return 0.02 * (1000.0 / steps); }

std::size_t NoiseSchedule::index(int t) const {
  if (t < 1 || t > steps())
    throw ArgumentError("schedule: step " + std::to_string(t) + " outside [1, " +
                        std::to_string(steps()) + "]");
  return static_cast<std::size_t>(t - 1);
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t == 0) return 1.0;
  return alpha_bar_[index(t)];
}

double NoiseSchedule::posterior_variance(int t, int t_next) const {
  if (t_next < 0 || t_next >= t) throw ArgumentError("schedule: need 0 <= t_next < t");
  const double ab_t = alpha_bar(t);
  const double ab_next = alpha_bar(t_next);
  const double beta_eff = 1.0 - ab_t / ab_next;
  return (1.0 - ab_next) / (1.0 - ab_t) * beta_eff;
}

namespace {

void check_step(const NoiseSchedule& s, int t, const char* what) {
  if (t < 1 || t > s.steps())
    throw ArgumentError(std::string(what) + ": step " + std::to_string(t) + " outside [1, " +
                        std::to_string(s.steps()) + "]");
}

}  // namespace

ComplexImage forward_noise(const ComplexImage& x0, int t, const ComplexImage& eps,
                           const NoiseSchedule& s) {
  check_step(s, t, "forward_noise");
  require_same_shape(x0, eps, "forward_noise");
  const double a = std::sqrt(s.alpha_bar(t));
  const double b = std::sqrt(1.0 - s.alpha_bar(t));
  ComplexImage out(x0.height(), x0.width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x0[i] + b * eps[i];
  return out;
}

ComplexImage predict_x0(const ComplexImage& y_t, const ComplexImage& eps_hat, int t,
                        const NoiseSchedule& s) {
  check_step(s, t, "predict_x0");
  require_same_shape(y_t, eps_hat, "predict_x0");
  const double a = std::sqrt(s.alpha_bar(t));
  const double b = std::sqrt(1.0 - s.alpha_bar(t));
  ComplexImage out(y_t.height(), y_t.width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (y_t[i] - b * eps_hat[i]) / a;
  return out;
}

ComplexImage reverse_transition(const ComplexImage& y_t, const ComplexImage& eps_hat, int t,
                                int t_next, const NoiseSchedule& s, NoiseSource& noise) {
  check_step(s, t, "reverse_transition");
  if (t_next < 0 || t_next >= t)
    throw ArgumentError("reverse_transition: need 0 <= t_next < t, got t=" + std::to_string(t) +
                        " t_next=" + std::to_string(t_next));
  require_same_shape(y_t, eps_hat, "reverse_transition");

  const double ab_t = s.alpha_bar(t);
  const double alpha_eff = ab_t / s.alpha_bar(t_next);
  const double beta_eff = 1.0 - alpha_eff;
  const double inv_sqrt_alpha = 1.0 / std::sqrt(alpha_eff);
  const double eps_coef = beta_eff / std::sqrt(1.0 - ab_t);

  ComplexImage out(y_t.height(), y_t.width());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = inv_sqrt_alpha * (y_t[i] - eps_coef * eps_hat[i]);

  if (t_next > 0) {
    const double sigma = std::sqrt(s.posterior_variance(t, t_next));
    for (auto& v : out.values()) v += sigma * noise.normal();
  }
  return out;
}

ComplexImage reverse_step(const ComplexImage& y_t, const ComplexImage& eps_hat, int t,
                          const NoiseSchedule& s, NoiseSource& noise) {
  return reverse_transition(y_t, eps_hat, t, t - 1, s, noise);
}

ComplexImage real_normal_image(std::size_t height, std::size_t width, NoiseSource& noise) {
  ComplexImage out(height, width);
  for (auto& v : out.values()) v = Complex(noise.normal(), 0.0);
  return out;
}

}  // namespace tcdiff
