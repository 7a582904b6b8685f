// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tcdiff/oracle.hpp"
#include "test_util.hpp"

using namespace tcdiff;
using tcdiff::testing::random_image;

namespace {

ComplexImage constant(std::size_t h, std::size_t w, Complex v) {
  ComplexImage img(h, w);
  for (auto& x : img.values()) x = v;
  return img;
}

}  // namespace

TEST_CASE("deterministic prior returns its mean") {
  const auto s = NoiseSchedule::scaled_linear(100);
  const ComplexImage mu = random_image(4, 4, 1);
  const GaussianDenoiser d(GaussianPrior::uniform(mu, 0.0), s);
  for (int t : {1, 50, 100}) {
    const auto post = d.posterior_mean(random_image(4, 4, 2 + t), t);
    for (std::size_t i = 0; i < mu.size(); ++i) CHECK(std::abs(post[i] - mu[i]) < 1e-15);
  }
}

TEST_CASE("standard normal prior shrinks by sqrt(alpha_bar)") {
  const auto s = NoiseSchedule::scaled_linear(100);
  const GaussianDenoiser d(GaussianPrior::uniform(ComplexImage(3, 5), 1.0), s);
  const ComplexImage y = random_image(3, 5, 3);
  for (int t : {1, 30, 100}) {
    const auto post = d.posterior_mean(y, t);
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(std::abs(post[i] - std::sqrt(s.alpha_bar(t)) * y[i]) < 1e-14);
  }
}

TEST_CASE("noise prediction is consistent with the posterior mean") {
  const auto s = NoiseSchedule::scaled_linear(400);
  const GaussianDenoiser d(GaussianPrior::uniform(random_image(4, 4, 4), 0.3), s);
  const ComplexImage y = random_image(4, 4, 5);
  for (int t : {1, 200, 400}) {
    const auto x0 = predict_x0(y, d.predict_noise(y, t), t, s);
    const auto post = d.posterior_mean(y, t);
    CHECK(testing::max_abs_diff(x0, post) < 1e-10);
  }
}

TEST_CASE("posterior mean matches a Monte Carlo conditional mean") {
  // Sample (x0, eps) pairs, bin by y_t, and compare each bin's empirical mean
  // of x0 with the formula at the bin's mean y (exact since the formula is
  // affine in y).
  const auto s = NoiseSchedule::scaled_linear(400);
  const int t = 150;
  const double mu = 0.3, sd0 = 0.5;
  const double sa = std::sqrt(s.alpha_bar(t)), sb = std::sqrt(1.0 - s.alpha_bar(t));
  const GaussianDenoiser d(GaussianPrior::uniform(constant(1, 1, mu), sd0), s);

  std::mt19937_64 gen(2024);
  std::normal_distribution<double> normal;
  constexpr int n = 100000;
  std::vector<std::pair<double, double>> pairs(n);  // (y, x0)
  for (auto& p : pairs) {
    const double x0 = mu + sd0 * normal(gen);
    p = {sa * x0 + sb * normal(gen), x0};
  }
  std::sort(pairs.begin(), pairs.end());

  constexpr int bins = 20;
  const int per_bin = n / bins;
  for (int b = 0; b < bins; ++b) {
    double sy = 0.0, sx = 0.0, sx2 = 0.0;
    for (int i = b * per_bin; i < (b + 1) * per_bin; ++i) {
      sy += pairs[i].first;
      sx += pairs[i].second;
      sx2 += pairs[i].second * pairs[i].second;
    }
    const double mean_y = sy / per_bin, mean_x = sx / per_bin;
    const double var_x = sx2 / per_bin - mean_x * mean_x;
    const double se = std::sqrt(var_x / per_bin);
    const double formula = d.posterior_mean(constant(1, 1, mean_y), t)[0].real();
    CHECK_MESSAGE(std::abs(mean_x - formula) < 3.0 * se, "bin ", b);
  }
}

TEST_CASE("posterior mean limits at the schedule endpoints") {
  const auto s = NoiseSchedule::scaled_linear(4000);
  const ComplexImage mu = random_image(4, 4, 6);
  const GaussianDenoiser d(GaussianPrior::uniform(mu, 0.2), s);
  const ComplexImage y = random_image(4, 4, 7);

  const auto low_noise = d.posterior_mean(y, 1);
  const auto high_noise = d.posterior_mean(y, 4000);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double scale = std::abs(y[i]) + std::abs(mu[i]);
    CHECK(std::abs(low_noise[i] - y[i] / std::sqrt(s.alpha_bar(1))) < 1e-3 * scale);
    CHECK(std::abs(high_noise[i] - mu[i]) < 1e-3 * scale);
  }
}

TEST_CASE("invalid priors are rejected") {
  const auto s = NoiseSchedule::scaled_linear(100);
  CHECK_THROWS_AS(GaussianDenoiser(GaussianPrior::uniform(ComplexImage(2, 2), -1.0), s),
                  ArgumentError);
  GaussianPrior bad{ComplexImage(2, 2), {1.0}};
  CHECK_THROWS_AS(GaussianDenoiser(bad, s), ArgumentError);
  const GaussianDenoiser d(GaussianPrior::uniform(ComplexImage(2, 2), 1.0), s);
  CHECK_THROWS_AS(d.predict_noise(ComplexImage(3, 2), 1), ArgumentError);
}
