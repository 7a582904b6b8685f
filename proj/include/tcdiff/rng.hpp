// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace tcdiff {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the same
/// counter and key always yield the same four words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Source of standard-normal draws consumed by the samplers.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual double normal() = 0;
  void fill_normal(std::span<double> out) {
    for (auto& v : out) v = normal();
  }
};

// Stream purposes. Keeping them in the counter means a chain stream can never
// alias a mask stream for the same seed.
enum class StreamPurpose : std::uint32_t {
  kMask = 1,
  kChain = 2,
  kRefine = 3,
  kWeights = 4,
  kTest = 15,
};

/// Counter-based random stream keyed by (seed, purpose, index). Streams with
/// different (purpose, index) never overlap, and a stream's output depends
/// only on its key and how many values were drawn, never on thread timing.
class RngStream final : public NoiseSource {
 public:
  RngStream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t index);

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double normal() override;

  std::uint64_t blocks_consumed() const { return block_; }

 private:
  std::array<std::uint32_t, 4> next_block();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t purpose_;
  std::uint32_t index_;
  std::uint64_t block_ = 0;

  std::array<std::uint32_t, 4> buffer_{};
  int buffered_words_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Always returns 0. Used to switch off stochastic terms deterministically.
class ZeroNoise final : public NoiseSource {
 public:
  double normal() override { return 0.0; }
};

}  // namespace tcdiff
