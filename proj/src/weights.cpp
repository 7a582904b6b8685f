// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/weights.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>

#include "tcdiff/binary_io.hpp"
#include "tcdiff/errors.hpp"
#include "tcdiff/rng.hpp"
#include "tcdiff/unet.hpp"

namespace tcdiff {

namespace {

std::string dims_string(const std::vector<std::uint32_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

bool is_norm_tensor(const std::string& name) {
  return name.find("norm") != std::string::npos;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::size_t Tensor::numel() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void WeightSet::add(std::string name, Tensor tensor) {
  if (tensor.data.size() != tensor.numel())
    throw ArgumentError("weights: tensor '" + name + "' data does not match its dims");
  if (index_.contains(name)) throw ArgumentError("weights: duplicate tensor '" + name + "'");
  index_.emplace(name, tensors_.size());
  tensors_.emplace_back(std::move(name), std::move(tensor));
}

const Tensor& WeightSet::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw FormatError("weights: missing tensor '" + name + "'");
  return tensors_[it->second].second;
}

void write_weights(std::ostream& os, const WeightSet& weights) {
  os.write("MFUW", 4);
  le::put_u32(os, kWeightsVersion);
  le::put_u32(os, static_cast<std::uint32_t>(weights.size()));
  for (const auto& [name, tensor] : weights.tensors()) {
    le::put_u16(os, static_cast<std::uint16_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    le::put_u8(os, static_cast<std::uint8_t>(tensor.dims.size()));
    for (auto d : tensor.dims) le::put_u32(os, d);
    for (float v : tensor.data) le::put_f32(os, v);
  }
  if (!os) throw FormatError("weights: write failed");
}

WeightSet read_weights(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "MFUW")
    throw FormatError("weights: bad magic, expected \"MFUW\"");
  std::uint32_t version = 0, count = 0;
  if (!le::get_u32(is, version) || !le::get_u32(is, count))
    throw FormatError("weights: truncated header");
  if (version != kWeightsVersion)
    throw FormatError("weights: unsupported version " + std::to_string(version));

  const auto& manifest = architecture_manifest();
  if (count != manifest.size())
    throw FormatError("weights: file has " + std::to_string(count) + " tensors, architecture needs " +
                      std::to_string(manifest.size()));

  WeightSet weights;
  for (const auto& spec : manifest) {
    std::uint16_t name_len = 0;
    if (!le::get_u16(is, name_len))
      throw FormatError("weights: truncated before tensor '" + spec.name + "'");
    std::string name(name_len, '\0');
    if (!is.read(name.data(), name_len))
      throw FormatError("weights: truncated name of tensor '" + spec.name + "'");
    if (name != spec.name)
      throw FormatError("weights: expected tensor '" + spec.name + "', found '" + name + "'");

    std::uint8_t ndim = 0;
    if (!le::get_u8(is, ndim)) throw FormatError("weights: truncated header of tensor '" + name + "'");
    Tensor t;
    t.dims.resize(ndim);
    for (auto& d : t.dims)
      if (!le::get_u32(is, d)) throw FormatError("weights: truncated dims of tensor '" + name + "'");
    if (t.dims != spec.dims)
      throw FormatError("weights: tensor '" + name + "' has dims " + dims_string(t.dims) +
                        ", expected " + dims_string(spec.dims));
    t.data.resize(t.numel());
    for (auto& v : t.data)
      if (!le::get_f32(is, v)) throw FormatError("weights: truncated data of tensor '" + name + "'");
    weights.add(std::move(name), std::move(t));
  }
  return weights;
}

void save_weights(const std::filesystem::path& path, const WeightSet& weights) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_weights(os, weights);
}

WeightSet load_weights(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_weights(is);
}

WeightSet init_random(std::uint64_t seed) {
  WeightSet weights;
  const auto& manifest = architecture_manifest();
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& spec = manifest[i];
    Tensor t{spec.dims, {}};
    t.data.resize(t.numel());
    if (is_norm_tensor(spec.name)) {
      std::fill(t.data.begin(), t.data.end(), ends_with(spec.name, ".weight") ? 1.0f : 0.0f);
    } else {
      // Biases share the fan-in of the weight they belong to; recover it from
      // the paired ".weight" spec, which always precedes the bias.
      std::size_t fan_in = 1;
      const auto& w = ends_with(spec.name, ".bias") ? manifest[i - 1] : spec;
      for (std::size_t d = 1; d < w.dims.size(); ++d) fan_in *= w.dims[d];
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      RngStream rng(seed, StreamPurpose::kWeights, static_cast<std::uint32_t>(i));
      for (auto& v : t.data) v = static_cast<float>((2.0 * rng.uniform() - 1.0) * bound);
    }
    weights.add(spec.name, std::move(t));
  }
  return weights;
}

}  // namespace tcdiff
