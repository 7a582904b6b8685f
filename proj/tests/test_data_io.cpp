// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "tcdiff/fastmri.hpp"
#include "tcdiff/fft.hpp"
#include "tcdiff/mask.hpp"
#include "tcdiff/phantom.hpp"
#include "tcdiff/png_writer.hpp"
#include "test_util.hpp"

using namespace tcdiff;

namespace {

// Independent rasterizer: its own copy of the ellipse table, each ellipse
// tested in its local frame.
RealImage brute_force_phantom(std::size_t h, std::size_t w) {
  const double table[10][6] = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},          {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},      {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},         {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},       {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},     {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
  RealImage img(h, w);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      const double x = (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(w) - 1.0;
      const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(h);
      double value = 0.0;
      for (const auto& e : table) {
        const double phi = e[5] * std::numbers::pi / 180.0;
        const double dx = x - e[3], dy = y - e[4];
        const double u = dx * std::cos(phi) + dy * std::sin(phi);
        const double v = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((u * u) / (e[1] * e[1]) + (v * v) / (e[2] * e[2]) <= 1.0) value += e[0];
      }
      img(r, c) = std::min(1.0, std::max(0.0, value));
    }
  return img;
}

}  // namespace

TEST_CASE("Shepp-Logan phantom") {
  const RealImage p = shepp_logan(64, 64);
  CHECK(p(32, 32) > 0.0);
  CHECK(p(0, 0) == 0.0);
  CHECK(p(0, 63) == 0.0);
  CHECK(p(63, 0) == 0.0);
  CHECK(p(63, 63) == 0.0);
  for (double v : p.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(p.values == brute_force_phantom(64, 64).values);
  CHECK(shepp_logan(40, 56).values == brute_force_phantom(40, 56).values);
  CHECK(shepp_logan(64, 64).values == p.values);
  CHECK_THROWS_AS(shepp_logan(7, 64), ArgumentError);
}

TEST_CASE("fastMRI volumes: fixture round trip, centering and Parseval") {
  const std::size_t h = 8, w = 6;
  std::vector<std::vector<Complex>> slices;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto img = testing::random_image(h, w, 40 + s);
    slices.emplace_back(img.values().begin(), img.values().end());
  }
  const auto path = testing::temp_path("fixture.h5");
  write_fastmri_kspace(path, slices, h, w);

  const Volume vol = read_fastmri_volume(path);
  REQUIRE(vol.slices() == 3);
  for (std::size_t s = 0; s < 3; ++s) {
    const KSpaceGrid& k = vol.kspace[s];
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) {
        // Stored as f32: the value read back is float-representable and
        // within half a float ulp of the source.
        const Complex stored = slices[s][r * w + c];
        const Complex got = k((r + h / 2) % h, (c + w / 2) % w);
        for (const auto& [g, want] : {std::pair{got.real(), stored.real()},
                                     std::pair{got.imag(), stored.imag()}}) {
          CHECK(static_cast<double>(static_cast<float>(g)) == g);
          CHECK(std::abs(g - want) <= std::ldexp(std::abs(want), -24));
        }
      }
    // Reference is the magnitude of the fully sampled zero-filled image.
    const double ref_norm = std::sqrt(std::inner_product(
        vol.references[s].values.begin(), vol.references[s].values.end(),
        vol.references[s].values.begin(), 0.0));
    CHECK(std::abs(ref_norm - l2_norm(k.values())) <= 1e-6 * l2_norm(k.values()));
    const ComplexImage zf = zero_fill(k);
    CHECK(std::abs(l2_norm(zf.values()) - l2_norm(k.values())) <=
          1e-6 * l2_norm(k.values()));
  }
}

TEST_CASE("fastMRI reader rejects malformed files") {
  const auto not_hdf5 = testing::temp_path("garbage.h5");
  std::ofstream(not_hdf5) << "this is not hdf5";
  CHECK_THROWS_AS(read_fastmri_volume(not_hdf5), FormatError);
  CHECK_THROWS_AS(read_fastmri_volume(testing::temp_path("does_not_exist.h5")), FormatError);
}

TEST_CASE("drop_initial_slices") {
  Volume vol;
  for (int s = 0; s < 35; ++s) {
    KSpaceGrid k(2, 2);
    k[0] = static_cast<double>(s);
    vol.kspace.push_back(k);
    vol.references.emplace_back(2, 2);
  }
  const Volume trimmed = drop_initial_slices(vol);
  CHECK(trimmed.slices() == 30);
  for (std::size_t i = 0; i < trimmed.slices(); ++i)
    CHECK(trimmed.kspace[i] == vol.kspace[i + 5]);
  CHECK(drop_initial_slices(vol, 0).slices() == 35);
  Volume small;
  small.kspace.resize(5);
  small.references.resize(5);
  CHECK_THROWS_AS(drop_initial_slices(small), ArgumentError);
}

TEST_CASE("PNG output is written with the image dimensions") {
  const auto path = testing::temp_path("phantom.png");
  write_png(path, shepp_logan(32, 48));
  std::ifstream is(path, std::ios::binary);
  unsigned char header[24];
  REQUIRE(is.read(reinterpret_cast<char*>(header), 24));
  CHECK(header[1] == 'P');
  CHECK(header[2] == 'N');
  CHECK(header[3] == 'G');
  const auto be32 = [&](int o) {
    return (header[o] << 24) | (header[o + 1] << 16) | (header[o + 2] << 8) | header[o + 3];
  };
  CHECK(be32(16) == 48);
  CHECK(be32(20) == 32);
}
