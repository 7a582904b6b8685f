// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/c2f.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "tcdiff/fft.hpp"
#include "tcdiff/tckg.hpp"

namespace tcdiff {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_finite(const ComplexImage& y, const char* stage, int t) {
  if (!all_finite(y.values()))
    throw NumericalError(std::string("non-finite sampler state in ") + stage + " at step " +
                         std::to_string(t));
}

}  // namespace

void ReconstructionConfig::validate(const NoiseSchedule& s) const {
  if (stride < 1 || stride > s.steps())
    throw ArgumentError("c2f: stride k must lie in [1, T]");
  if (num_samples < 1) throw ArgumentError("c2f: need at least one sample (N >= 1)");
  if (refine_steps < 0 || refine_steps > s.steps())
    throw ArgumentError("c2f: T_refine must lie in [0, T]");
  if (repeats < 1) throw ArgumentError("c2f: K must be >= 1");
  if (threads < 1) throw ArgumentError("c2f: threads must be >= 1");
}

std::vector<int> build_coarse_schedule(int steps, int stride) {
  if (steps < 1) throw ArgumentError("coarse schedule: T must be >= 1");
  if (stride < 1 || stride > steps) throw ArgumentError("coarse schedule: k must lie in [1, T]");
  std::vector<int> out;
  for (int t = steps; t >= 1; t -= stride) out.push_back(t);
  if (out.back() != 1) out.push_back(1);
  return out;
}

ComplexImage average_samples(std::span<const ComplexImage> samples) {
  if (samples.empty()) throw ArgumentError("average_samples: empty sample list");
  ComplexImage sum(samples.front().height(), samples.front().width());
  for (const auto& s : samples) {
    require_same_shape(sum, s, "average_samples");
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += s[i];
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (auto& v : sum.values()) v *= inv;
  return sum;
}

ComplexImage run_coarse_chain(const Denoiser& denoiser, const KSpaceGrid& x_obs,
                              const SamplingMask& mask, const ReconstructionConfig& cfg,
                              const NoiseSchedule& s, int chain) {
  const auto schedule = build_coarse_schedule(s.steps(), cfg.stride);
  RngStream rng(cfg.seed, StreamPurpose::kChain, static_cast<std::uint32_t>(chain));
  TckgParams params{cfg.repeats, &mask, &x_obs, false};

  ComplexImage y = real_normal_image(x_obs.height(), x_obs.width(), rng);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const int t = schedule[i];
    const int t_next = i + 1 < schedule.size() ? schedule[i + 1] : 0;
    y = tc_step(y, t, t_next, denoiser, params, s, rng);
    require_finite(y, "coarse chain", t);
  }
  return y;
}

ComplexImage refine(const ComplexImage& y_avg, const Denoiser& denoiser,
                    const KSpaceGrid& x_obs, const SamplingMask& mask,
                    const ReconstructionConfig& cfg, const NoiseSchedule& s) {
  if (cfg.refine_steps == 0) return y_avg;
  RngStream rng(cfg.seed, StreamPurpose::kRefine, 0);
  TckgParams params{cfg.repeats, &mask, &x_obs, true};

  ComplexImage y = renoise(y_avg, 0, cfg.refine_steps, s, rng);
  for (int t = cfg.refine_steps; t >= 1; --t) {
    y = tc_step(y, t, t - 1, denoiser, params, s, rng);
    require_finite(y, "refinement", t);
  }
  return y;
}

C2fResult c2f_run(const Denoiser& denoiser, const KSpaceGrid& x_obs, const SamplingMask& mask,
                  const ReconstructionConfig& cfg, const NoiseSchedule& s) {
  cfg.validate(s);
  if (mask.height() != x_obs.height() || mask.width() != x_obs.width())
    throw ArgumentError("c2f: mask and observation shapes differ");

  C2fResult result;
  const auto n = static_cast<std::size_t>(cfg.num_samples);
  result.chains.resize(n);
  std::vector<std::exception_ptr> errors(n);

  auto start = Clock::now();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < n; c = next++) {
      try {
        result.chains[c] =
            run_coarse_chain(denoiser, x_obs, mask, cfg, s, static_cast<int>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  result.times.coarse_seconds = seconds_since(start);

  start = Clock::now();
  result.averaged = average_samples(result.chains);
  result.times.average_seconds = seconds_since(start);

  start = Clock::now();
  result.reconstruction = refine(result.averaged, denoiser, x_obs, mask, cfg, s);
  result.times.refine_seconds = seconds_since(start);
  return result;
}

ComplexImage c2f_sample(const Denoiser& denoiser, const KSpaceGrid& x_obs,
                        const SamplingMask& mask, const ReconstructionConfig& cfg,
                        const NoiseSchedule& s) {
  return c2f_run(denoiser, x_obs, mask, cfg, s).reconstruction;
}

double consistency_residual(const ComplexImage& y, const KSpaceGrid& x_obs,
                            const SamplingMask& mask) {
  const KSpaceGrid k = fft2c(y);
  double worst = 0.0;
  for (std::size_t r = 0; r < k.height(); ++r)
    for (std::size_t c = 0; c < k.width(); ++c)
      if (mask.sampled(r, c)) worst = std::max(worst, std::abs(k(r, c) - x_obs(r, c)));
  return worst;
}

}  // namespace tcdiff
