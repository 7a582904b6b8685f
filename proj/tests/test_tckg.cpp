// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "tcdiff/fft.hpp"
#include "tcdiff/oracle.hpp"
#include "tcdiff/tckg.hpp"
#include "test_util.hpp"

using namespace tcdiff;
using tcdiff::testing::max_abs_diff;
using tcdiff::testing::random_image;

namespace {

// Returns 1 for every draw.
class OnesNoise final : public NoiseSource {
 public:
  double normal() override { return 1.0; }
};

KSpaceGrid observation(std::size_t h, std::size_t w, std::uint64_t seed) {
  return fft2c(random_image(h, w, seed, true));
}

void skip_normals(RngStream& rng, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) rng.normal();
}

}  // namespace

TEST_CASE("noise_observation") {
  const auto s = NoiseSchedule::scaled_linear(100);
  const KSpaceGrid x = observation(6, 6, 1);

  SUBCASE("step 0 and zero-noise schedules return x_obs") {
    RngStream rng(1, StreamPurpose::kTest, 0);
    CHECK(noise_observation(x, 0, s, rng) == x);
    CHECK(noise_observation(x, 1, NoiseSchedule::from_betas({0.0}), rng) == x);
    CHECK(rng.blocks_consumed() == 0);
  }
  SUBCASE("zero noise source returns x_obs") {
    ZeroNoise zero;
    CHECK(max_abs_diff(noise_observation(x, 50, s, zero), x) == 0.0);
  }
  SUBCASE("per-coefficient variance equals 1 - alpha_bar (Monte Carlo, 1e4 draws)") {
    const int t = 40, draws = 10000;
    const KSpaceGrid zero(4, 4);
    RngStream rng(2, StreamPurpose::kTest, 0);
    std::vector<double> power(16, 0.0);
    for (int d = 0; d < draws; ++d) {
      const auto k = noise_observation(zero, t, s, rng);
      for (std::size_t i = 0; i < 16; ++i) power[i] += std::norm(k[i]);
    }
    const double expected = 1.0 - s.alpha_bar(t);
    for (double p : power) CHECK(std::abs(p / draws - expected) / expected < 0.05);
  }
  SUBCASE("step range is checked") {
    ZeroNoise zero;
    CHECK_THROWS_AS(noise_observation(x, 101, s, zero), ArgumentError);
    CHECK_THROWS_AS(noise_observation(x, -1, s, zero), ArgumentError);
  }
}

TEST_CASE("data_consistency") {
  const ComplexImage y = random_image(6, 8, 3);
  const KSpaceGrid xo = observation(6, 8, 4);

  CHECK(max_abs_diff(data_consistency(y, xo, SamplingMask::full(6, 8)), ifft2c(xo)) < 1e-12);
  CHECK(max_abs_diff(data_consistency(y, xo, SamplingMask::empty(6, 8)), y) < 1e-10);

  std::vector<std::uint8_t> cols(8, 0);
  cols[5] = 1;
  const ComplexImage out = data_consistency(y, xo, SamplingMask(6, cols, 8.0, 0.0));
  const KSpaceGrid got = testing::direct_forward(out);
  const KSpaceGrid model = testing::direct_forward(y);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      CHECK(std::abs(got(r, c) - (c == 5 ? xo(r, c) : model(r, c))) < 1e-10);

  CHECK_THROWS_AS(data_consistency(y, observation(6, 7, 1), SamplingMask::full(6, 7)),
                  ArgumentError);
}

TEST_CASE("renoise") {
  const auto s = NoiseSchedule::scaled_linear(200);
  const ComplexImage y = random_image(3, 3, 5, true);

  SUBCASE("single-step jump uses the forward kernel coefficients") {
    OnesNoise ones;
    const int t = 70;
    const auto out = renoise(y, t - 1, t, s, ones);
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(std::abs(out[i] - (std::sqrt(1.0 - s.beta(t)) * y[i] + std::sqrt(s.beta(t)))) <
            1e-12);
  }
  SUBCASE("zero noise is pure scaling") {
    ZeroNoise zero;
    const auto out = renoise(y, 20, 90, s, zero);
    const double k = std::sqrt(s.alpha_bar(90) / s.alpha_bar(20));
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(out[i] - k * y[i]) < 1e-15);
  }
  SUBCASE("two jumps compose to one in distribution (Monte Carlo, 1e4 draws)") {
    RngStream rng(6, StreamPurpose::kTest, 0);
    const int t0 = 10, t1 = 60, t2 = 150, draws = 10000;
    std::vector<double> sum2(9, 0.0);
    for (int d = 0; d < draws; ++d) {
      const auto out = renoise(renoise(ComplexImage(3, 3), t0, t1, s, rng), t1, t2, s, rng);
      for (std::size_t i = 0; i < 9; ++i) sum2[i] += std::norm(out[i]);
    }
    const double expected = 1.0 - s.alpha_bar(t2) / s.alpha_bar(t0);
    for (double v : sum2) CHECK(std::abs(v / draws - expected) / expected < 0.05);
  }
  SUBCASE("ordering is checked") {
    ZeroNoise zero;
    CHECK_THROWS_AS(renoise(y, 5, 5, s, zero), ArgumentError);
    CHECK_THROWS_AS(renoise(y, 5, 201, s, zero), ArgumentError);
  }
}

TEST_CASE("tc_step") {
  const auto s = NoiseSchedule::scaled_linear(100);
  const std::size_t h = 8, w = 8;
  const GaussianDenoiser d(GaussianPrior::uniform(ComplexImage(h, w), 1.0), s);
  const KSpaceGrid xo = observation(h, w, 7);
  const SamplingMask mask = make_mask(h, w, 2.0, 0.25, 3);
  const ComplexImage yt = random_image(h, w, 8, true);
  const int t = 60, t_next = 55;

  SUBCASE("K = 1 is one transition plus one projection") {
    RngStream a(9, StreamPurpose::kTest, 0), b(9, StreamPurpose::kTest, 0);
    const auto got = tc_step(yt, t, t_next, d, TckgParams{1, &mask, &xo}, s, a);
    const auto y_prime = reverse_transition(yt, d.predict_noise(yt, t), t, t_next, s, b);
    const auto expected = data_consistency(y_prime, noise_observation(xo, t_next, s, b), mask);
    CHECK(got == expected);
  }

  SUBCASE("empty mask with K = 1 equals a plain reverse step") {
    const SamplingMask none = SamplingMask::empty(h, w);
    RngStream a(10, StreamPurpose::kTest, 0), b(10, StreamPurpose::kTest, 0);
    const auto got = tc_step(yt, t, t - 1, d, TckgParams{1, &none, &xo}, s, a);
    const auto plain = reverse_step(yt, d.predict_noise(yt, t), t, s, b);
    CHECK(max_abs_diff(got, plain) < 1e-12);
  }

  SUBCASE("sampled K-space equals the observation drawn in the final repeat") {
    RngStream a(11, StreamPurpose::kTest, 0), replay(11, StreamPurpose::kTest, 0);
    const auto got = tc_step(yt, t, t_next, d, TckgParams{2, &mask, &xo}, s, a);
    // Draw order: transition, observation, renoise, transition, observation.
    skip_normals(replay, 4 * h * w);
    const KSpaceGrid xo_t = noise_observation(xo, t_next, s, replay);
    const KSpaceGrid k = fft2c(got);
    double worst = 0.0;
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c)
        if (mask.sampled(r, c)) worst = std::max(worst, std::abs(k(r, c) - xo_t(r, c)));
    CHECK(worst <= 1e-6 * max_abs(xo_t.values()));
    CHECK(worst < 1e-12);
  }

  SUBCASE("clean-observation mode projects onto x_obs itself") {
    RngStream a(12, StreamPurpose::kTest, 0);
    const auto got = tc_step(yt, t, t_next, d, TckgParams{3, &mask, &xo, true}, s, a);
    const KSpaceGrid k = fft2c(got);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c)
        if (mask.sampled(r, c)) CHECK(std::abs(k(r, c) - xo(r, c)) < 1e-12);
  }

  SUBCASE("zero-noise runs are deterministic") {
    ZeroNoise z1, z2;
    CHECK(tc_step(yt, t, t_next, d, TckgParams{3, &mask, &xo}, s, z1) ==
          tc_step(yt, t, t_next, d, TckgParams{3, &mask, &xo}, s, z2));
  }

  SUBCASE("invalid parameters") {
    ZeroNoise z;
    CHECK_THROWS_AS(tc_step(yt, t, t_next, d, TckgParams{0, &mask, &xo}, s, z), ArgumentError);
    CHECK_THROWS_AS(tc_step(yt, t, t, d, TckgParams{1, &mask, &xo}, s, z), ArgumentError);
    CHECK_THROWS_AS(tc_step(yt, t, t_next, d, TckgParams{1, nullptr, &xo}, s, z), ArgumentError);
  }
}
