// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tcdiff/denoiser.hpp"
#include "tcdiff/mask.hpp"
#include "tcdiff/schedule.hpp"

namespace tcdiff {

struct ReconstructionConfig {
  int stride = 40;         // k
  int num_samples = 4;     // N
  int refine_steps = 200;  // T_refine
  int repeats = 3;         // K
  std::uint64_t seed = 0;
  int threads = 1;  // chain-level parallelism; never changes results

  void validate(const NoiseSchedule& s) const;
};

/// {T, T-k, T-2k, ...} down to the last value >= 1, with 1 appended when the
/// stride does not land on it. Strictly decreasing.
std::vector<int> build_coarse_schedule(int steps, int stride);

/// Elementwise arithmetic mean.
ComplexImage average_samples(std::span<const ComplexImage> samples);

struct C2fStageTimes {
  double coarse_seconds = 0.0;
  double average_seconds = 0.0;
  double refine_seconds = 0.0;
};

struct C2fResult {
  ComplexImage reconstruction;     // refined y_0
  ComplexImage averaged;           // y_0^avg before refinement
  std::vector<ComplexImage> chains;  // per-chain y_0, in chain order
  C2fStageTimes times;
};

/// Runs one conditioned chain from pure noise down the coarse schedule.
/// Chain c draws from the (seed, chain, c) stream only.
ComplexImage run_coarse_chain(const Denoiser& denoiser, const KSpaceGrid& x_obs,
                              const SamplingMask& mask, const ReconstructionConfig& cfg,
                              const NoiseSchedule& s, int chain);

/// Renoises y_avg to T_refine and denoises at unit stride, projecting onto the
/// clean observation. Identity when T_refine == 0.
ComplexImage refine(const ComplexImage& y_avg, const Denoiser& denoiser,
                    const KSpaceGrid& x_obs, const SamplingMask& mask,
                    const ReconstructionConfig& cfg, const NoiseSchedule& s);

/// Full coarse-to-fine reconstruction: N chains (run concurrently on up to
/// cfg.threads threads), averaged, then refined.
C2fResult c2f_run(const Denoiser& denoiser, const KSpaceGrid& x_obs, const SamplingMask& mask,
                  const ReconstructionConfig& cfg, const NoiseSchedule& s);

ComplexImage c2f_sample(const Denoiser& denoiser, const KSpaceGrid& x_obs,
                        const SamplingMask& mask, const ReconstructionConfig& cfg,
                        const NoiseSchedule& s);

/// max |M (fft2c(y) - x_obs)|, the hard data-consistency residual.
double consistency_residual(const ComplexImage& y, const KSpaceGrid& x_obs,
                            const SamplingMask& mask);

}  // namespace tcdiff
