// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace tcdiff {

namespace le {

namespace {

template <typename U>
void put_uint(std::ostream& os, U v) {
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(bytes, sizeof(U));
}

template <typename U>
bool get_uint(std::istream& is, U& v) {
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) return false;
  v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return true;
}

}  // namespace

void put_u8(std::ostream& os, std::uint8_t v) { os.put(static_cast<char>(v)); }
void put_u16(std::ostream& os, std::uint16_t v) { put_uint(os, v); }
void put_u32(std::ostream& os, std::uint32_t v) { put_uint(os, v); }
void put_f32(std::ostream& os, float v) { put_uint(os, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::ostream& os, double v) { put_uint(os, std::bit_cast<std::uint64_t>(v)); }

bool get_u8(std::istream& is, std::uint8_t& v) { return get_uint(is, v); }
bool get_u16(std::istream& is, std::uint16_t& v) { return get_uint(is, v); }
bool get_u32(std::istream& is, std::uint32_t& v) { return get_uint(is, v); }
bool get_f32(std::istream& is, float& v) {
  std::uint32_t bits;
  if (!get_uint(is, bits)) return false;
  v = std::bit_cast<float>(bits);
  return true;
}
bool get_f64(std::istream& is, double& v) {
  std::uint64_t bits;
  if (!get_uint(is, bits)) return false;
  v = std::bit_cast<double>(bits);
  return true;
}

}  // namespace le

namespace {

void expect_magic(std::istream& is, const char (&magic)[5], const char* what) {
  char got[4];
  if (!is.read(got, 4) || std::memcmp(got, magic, 4) != 0)
    throw FormatError(std::string(what) + ": bad magic, expected \"" + magic + "\"");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return is;
}

}  // namespace

void write_cplx(std::ostream& os, std::size_t height, std::size_t width,
                std::span<const Complex> values) {
  os.write("CPLX", 4);
  le::put_u32(os, kCplxVersion);
  le::put_u32(os, static_cast<std::uint32_t>(height));
  le::put_u32(os, static_cast<std::uint32_t>(width));
  for (const auto& v : values) {
    le::put_f32(os, static_cast<float>(v.real()));
    le::put_f32(os, static_cast<float>(v.imag()));
  }
  if (!os) throw FormatError("CPLX: write failed");
}

std::vector<Complex> read_cplx(std::istream& is, std::size_t& height, std::size_t& width) {
  expect_magic(is, "CPLX", "CPLX");
  std::uint32_t version, h, w;
  if (!le::get_u32(is, version) || !le::get_u32(is, h) || !le::get_u32(is, w))
    throw FormatError("CPLX: truncated header");
  if (version != kCplxVersion)
    throw FormatError("CPLX: unsupported version " + std::to_string(version));
  if (h == 0 || w == 0) throw FormatError("CPLX: zero-sized grid");
  std::vector<Complex> values(static_cast<std::size_t>(h) * w);
  for (auto& v : values) {
    float re, im;
    if (!le::get_f32(is, re) || !le::get_f32(is, im))
      throw FormatError("CPLX: truncated data, expected " + std::to_string(values.size()) +
                        " values");
    v = Complex(re, im);
  }
  height = h;
  width = w;
  return values;
}

template <typename Domain>
void save_cplx(const std::filesystem::path& path, const ComplexGrid<Domain>& grid) {
  auto os = open_out(path);
  write_cplx(os, grid.height(), grid.width(), grid.values());
}

template <typename Domain>
ComplexGrid<Domain> load_cplx(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::size_t h = 0, w = 0;
  auto values = read_cplx(is, h, w);
  return ComplexGrid<Domain>(h, w, std::move(values));
}

template void save_cplx(const std::filesystem::path&, const ComplexImage&);
template void save_cplx(const std::filesystem::path&, const KSpaceGrid&);
template ComplexImage load_cplx<ImageDomain>(const std::filesystem::path&);
template KSpaceGrid load_cplx<FrequencyDomain>(const std::filesystem::path&);

void write_mask(std::ostream& os, const SamplingMask& mask) {
  os.write("MASK", 4);
  le::put_u32(os, kMaskVersion);
  le::put_u32(os, static_cast<std::uint32_t>(mask.height()));
  le::put_u32(os, static_cast<std::uint32_t>(mask.width()));
  for (auto c : mask.columns()) le::put_u8(os, c);
  le::put_f64(os, mask.acceleration());
  le::put_f64(os, mask.center_fraction());
  if (!os) throw FormatError("MASK: write failed");
}

SamplingMask read_mask(std::istream& is) {
  expect_magic(is, "MASK", "MASK");
  std::uint32_t version, h, w;
  if (!le::get_u32(is, version) || !le::get_u32(is, h) || !le::get_u32(is, w))
    throw FormatError("MASK: truncated header");
  if (version != kMaskVersion)
    throw FormatError("MASK: unsupported version " + std::to_string(version));
  if (h == 0 || w == 0) throw FormatError("MASK: zero-sized mask");
  std::vector<std::uint8_t> columns(w);
  for (auto& c : columns) {
    if (!le::get_u8(is, c)) throw FormatError("MASK: truncated column flags");
    if (c > 1) throw FormatError("MASK: column flag is not 0/1");
  }
  double acceleration, center_fraction;
  if (!le::get_f64(is, acceleration) || !le::get_f64(is, center_fraction))
    throw FormatError("MASK: truncated trailer");
  return SamplingMask(h, std::move(columns), acceleration, center_fraction);
}

void save_mask(const std::filesystem::path& path, const SamplingMask& mask) {
  auto os = open_out(path);
  write_mask(os, mask);
}

SamplingMask load_mask(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_mask(is);
}

}  // namespace tcdiff
