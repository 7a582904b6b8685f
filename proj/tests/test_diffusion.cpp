// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "tcdiff/schedule.hpp"
#include "test_util.hpp"

using namespace tcdiff;
using tcdiff::testing::max_abs_diff;
using tcdiff::testing::random_image;

TEST_CASE("schedule construction") {
  SUBCASE("single step") {
    const auto s = NoiseSchedule::linear(1, 0.3, 0.5);
    CHECK(s.alpha_bar(1) == doctest::Approx(1.0 - 0.3));
  }
  SUBCASE("constant beta gives a geometric alpha_bar") {
    const auto s = NoiseSchedule::linear(50, 0.02, 0.02);
    for (int t = 1; t <= 50; ++t) CHECK(s.alpha_bar(t) == doctest::Approx(std::pow(0.98, t)).epsilon(1e-12));
  }
  SUBCASE("bounds are enforced") {
    CHECK_THROWS_AS(NoiseSchedule::linear(0, 0.1, 0.2), ArgumentError);
    CHECK_THROWS_AS(NoiseSchedule::linear(10, 0.0, 0.2), ArgumentError);
    CHECK_THROWS_AS(NoiseSchedule::linear(10, 0.3, 0.2), ArgumentError);
    CHECK_THROWS_AS(NoiseSchedule::linear(10, 0.1, 1.0), ArgumentError);
    const auto s = NoiseSchedule::linear(10, 0.1, 0.2);
    CHECK_THROWS_AS(s.beta(0), ArgumentError);
    CHECK_THROWS_AS(s.alpha_bar(11), ArgumentError);
  }
}

TEST_CASE("default 4000-step schedule matches an extended-precision product") {
  const int T = 4000;
  const auto s = NoiseSchedule::scaled_linear(T);
  const long double lo = 1e-4L * 0.25L, hi = 0.02L * 0.25L;
  long double prod = 1.0L;
  for (int t = 1; t <= T; ++t) prod *= 1.0L - (lo + (hi - lo) * (t - 1) / (T - 1));
  CHECK(std::abs(s.alpha_bar(T) - static_cast<double>(prod)) / static_cast<double>(prod) < 1e-10);
  CHECK(s.beta(1) == doctest::Approx(2.5e-5));
  CHECK(s.beta(T) == doctest::Approx(5e-3));

  double prev = 1.0;
  for (int t = 1; t <= T; ++t) {
    CHECK_MESSAGE(s.alpha_bar(t) < prev, "alpha_bar not decreasing at ", t);
    prev = s.alpha_bar(t);
  }
  CHECK(s.alpha_bar(T) > 0.0);
  CHECK(s.alpha_bar(0) == 1.0);
}

TEST_CASE("forward_noise") {
  const auto s = NoiseSchedule::linear(100, 1e-3, 0.05);
  const ComplexImage x0 = random_image(4, 5, 1);
  const ComplexImage zero(4, 5);
  SUBCASE("zero-noise schedule leaves x0 unchanged") {
    const auto flat = NoiseSchedule::from_betas({0.0, 0.0});
    CHECK(forward_noise(x0, 2, random_image(4, 5, 2), flat) == x0);
  }
  SUBCASE("eps = 0 scales by sqrt(alpha_bar)") {
    const auto y = forward_noise(x0, 40, zero, s);
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(std::abs(y[i] - std::sqrt(s.alpha_bar(40)) * x0[i]) < 1e-15);
  }
  SUBCASE("step range is checked") {
    CHECK_THROWS_AS(forward_noise(x0, 0, zero, s), ArgumentError);
    CHECK_THROWS_AS(forward_noise(x0, 101, zero, s), ArgumentError);
  }
  SUBCASE("per-pixel variance is 1 - alpha_bar (Monte Carlo, 1e4 draws)") {
    const int t = 30, draws = 10000;
    RngStream rng(5, StreamPurpose::kTest, 0);
    std::vector<double> sum(16, 0.0), sum2(16, 0.0);
    for (int d = 0; d < draws; ++d) {
      const auto y = forward_noise(ComplexImage(4, 4), t, real_normal_image(4, 4, rng), s);
      for (std::size_t i = 0; i < 16; ++i) {
        sum[i] += y[i].real();
        sum2[i] += y[i].real() * y[i].real();
      }
    }
    const double expected = 1.0 - s.alpha_bar(t);
    for (std::size_t i = 0; i < 16; ++i) {
      const double mean = sum[i] / draws;
      const double var = sum2[i] / draws - mean * mean;
      CHECK(std::abs(var - expected) / expected < 0.05);
    }
  }
}

TEST_CASE("predict_x0 inverts forward_noise") {
  const auto s = NoiseSchedule::scaled_linear(400);
  const ComplexImage x0 = random_image(6, 6, 3), eps = random_image(6, 6, 4);
  for (int t : {1, 17, 200, 400})
    CHECK(max_abs_diff(predict_x0(forward_noise(x0, t, eps, s), eps, t, s), x0) < 1e-9);

  const auto quarter = NoiseSchedule::from_betas({0.75});
  const ComplexImage y = random_image(3, 3, 5);
  const auto doubled = predict_x0(y, ComplexImage(3, 3), 1, quarter);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(doubled[i] - 2.0 * y[i]) < 1e-15);

  // Literal re-evaluation in long double.
  const int t = 123;
  const ComplexImage yt = random_image(5, 4, 6), e = random_image(5, 4, 7);
  const auto got = predict_x0(yt, e, t, s);
  const long double ab = s.alpha_bar(t);
  for (std::size_t i = 0; i < yt.size(); ++i) {
    const long double re =
        (yt[i].real() - std::sqrt(1.0L - ab) * e[i].real()) / std::sqrt(ab);
    const long double im =
        (yt[i].imag() - std::sqrt(1.0L - ab) * e[i].imag()) / std::sqrt(ab);
    CHECK(std::abs(got[i].real() - static_cast<double>(re)) < 1e-12);
    CHECK(std::abs(got[i].imag() - static_cast<double>(im)) < 1e-12);
  }
  CHECK_THROWS_AS(predict_x0(yt, e, 0, s), ArgumentError);
}

TEST_CASE("reverse_step") {
  const auto s = NoiseSchedule::scaled_linear(200);
  const ComplexImage x0 = random_image(4, 4, 8), eps = random_image(4, 4, 9);

  SUBCASE("t = 1 injects no noise") {
    RngStream rng(1, StreamPurpose::kTest, 0);
    ZeroNoise zero;
    const auto y1 = forward_noise(x0, 1, eps, s);
    CHECK(reverse_step(y1, eps, 1, s, rng) == reverse_step(y1, eps, 1, s, zero));
    CHECK(rng.blocks_consumed() == 0);
  }

  SUBCASE("exact noise and no sampling noise give the closed-form posterior mean") {
    ZeroNoise zero;
    for (int t : {2, 50, 200}) {
      const auto yt = forward_noise(x0, t, eps, s);
      const auto got = reverse_step(yt, eps, t, s, zero);
      const double ab = s.alpha_bar(t), ab_prev = s.alpha_bar(t - 1), beta = s.beta(t);
      const double c0 = std::sqrt(ab_prev) * beta / (1.0 - ab);
      const double ct = std::sqrt(1.0 - beta) * (1.0 - ab_prev) / (1.0 - ab);
      for (std::size_t i = 0; i < x0.size(); ++i)
        CHECK(std::abs(got[i] - (c0 * x0[i] + ct * yt[i])) < 1e-9);
    }
  }

  SUBCASE("stride-aware transition matches the posterior of the jump") {
    ZeroNoise zero;
    const int t = 120, t_next = 80;
    const auto yt = forward_noise(x0, t, eps, s);
    const auto got = reverse_transition(yt, eps, t, t_next, s, zero);
    const double ab = s.alpha_bar(t), abn = s.alpha_bar(t_next);
    const double c0 = std::sqrt(abn) * (1.0 - ab / abn) / (1.0 - ab);
    const double ct = std::sqrt(ab / abn) * (1.0 - abn) / (1.0 - ab);
    for (std::size_t i = 0; i < x0.size(); ++i)
      CHECK(std::abs(got[i] - (c0 * x0[i] + ct * yt[i])) < 1e-9);
    CHECK(s.posterior_variance(t, t_next) ==
          doctest::Approx((1.0 - abn) / (1.0 - ab) * (1.0 - ab / abn)));
  }

  SUBCASE("a fixed stream reproduces bit-identically") {
    const auto yt = forward_noise(x0, 77, eps, s);
    RngStream a(3, StreamPurpose::kTest, 4), b(3, StreamPurpose::kTest, 4);
    CHECK(reverse_step(yt, eps, 77, s, a) == reverse_step(yt, eps, 77, s, b));
  }

  SUBCASE("step range is checked") {
    ZeroNoise zero;
    CHECK_THROWS_AS(reverse_step(x0, eps, 0, s, zero), ArgumentError);
    CHECK_THROWS_AS(reverse_step(x0, eps, 201, s, zero), ArgumentError);
    CHECK_THROWS_AS(reverse_transition(x0, eps, 10, 10, s, zero), ArgumentError);
  }
}
