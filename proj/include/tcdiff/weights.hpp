// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace tcdiff {

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t numel() const;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

struct TensorSpec {
  std::string name;
  std::vector<std::uint32_t> dims;
};

/// Named tensors in manifest order.
class WeightSet {
 public:
  void add(std::string name, Tensor tensor);
  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.contains(name); }

  std::size_t size() const { return tensors_.size(); }
  const std::vector<std::pair<std::string, Tensor>>& tensors() const { return tensors_; }

  friend bool operator==(const WeightSet& a, const WeightSet& b) {
    return a.tensors_ == b.tensors_;
  }

 private:
  std::vector<std::pair<std::string, Tensor>> tensors_;
  std::map<std::string, std::size_t> index_;
};

// Weight file ("MFUW"):
//   magic "MFUW", u32 version, u32 tensor count, then per tensor
//   u16 name length, UTF-8 name, u8 ndim, u32 dims[ndim], f32 data.
// Little-endian throughout. Tensors must match architecture_manifest() in
// order, name and shape.
inline constexpr std::uint32_t kWeightsVersion = 1;

void write_weights(std::ostream& os, const WeightSet& weights);
WeightSet read_weights(std::istream& is);
void save_weights(const std::filesystem::path& path, const WeightSet& weights);
WeightSet load_weights(const std::filesystem::path& path);

/// Fills the reference architecture deterministically from `seed`.
/// Convolution and linear tensors are uniform in +-1/sqrt(fan_in); group-norm
/// scales are 1 and offsets 0.
WeightSet init_random(std::uint64_t seed);

}  // namespace tcdiff
