// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "tcdiff/grid.hpp"
#include "tcdiff/mask.hpp"

namespace tcdiff {

// CPLX: "CPLX", u32 version, u32 H, u32 W, H*W interleaved (re, im) f32.
// MASK: "MASK", u32 version, u32 H, u32 W, W column bytes, f64 acceleration,
//       f64 center_fraction.
// All integers and floats little-endian.
inline constexpr std::uint32_t kCplxVersion = 1;
inline constexpr std::uint32_t kMaskVersion = 1;

/// Values are narrowed to f32 on write.
void write_cplx(std::ostream& os, std::size_t height, std::size_t width,
                std::span<const Complex> values);
std::vector<Complex> read_cplx(std::istream& is, std::size_t& height, std::size_t& width);

template <typename Domain>
void save_cplx(const std::filesystem::path& path, const ComplexGrid<Domain>& grid);

template <typename Domain>
ComplexGrid<Domain> load_cplx(const std::filesystem::path& path);

void write_mask(std::ostream& os, const SamplingMask& mask);
SamplingMask read_mask(std::istream& is);
void save_mask(const std::filesystem::path& path, const SamplingMask& mask);
SamplingMask load_mask(const std::filesystem::path& path);

// Little-endian primitives shared with the weight-file reader.
namespace le {
void put_u8(std::ostream& os, std::uint8_t v);
void put_u16(std::ostream& os, std::uint16_t v);
void put_u32(std::ostream& os, std::uint32_t v);
void put_f32(std::ostream& os, float v);
void put_f64(std::ostream& os, double v);
bool get_u8(std::istream& is, std::uint8_t& v);
bool get_u16(std::istream& is, std::uint16_t& v);
bool get_u32(std::istream& is, std::uint32_t& v);
bool get_f32(std::istream& is, float& v);
bool get_f64(std::istream& is, double& v);
}  // namespace le

}  // namespace tcdiff
