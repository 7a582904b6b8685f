// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tcdiff/fft.hpp"

namespace tcdiff {

FeatureMap to_channels(const ComplexImage& img) {
  FeatureMap fm(1, 2, img.height(), img.width());
  for (std::size_t i = 0; i < img.size(); ++i) {
    fm.values[i] = img[i].real();
    fm.values[fm.plane() + i] = img[i].imag();
  }
  return fm;
}

ComplexImage from_channels(const FeatureMap& fm) {
  if (fm.batch != 1 || fm.channels != 2)
    throw ArgumentError("from_channels: expected a 1 x 2 x H x W tensor");
  ComplexImage img(fm.height, fm.width);
  for (std::size_t i = 0; i < img.size(); ++i)
    img[i] = Complex(fm.values[i], fm.values[fm.plane() + i]);
  return img;
}

ModulationConfig ModulationConfig::defaults(int decoder_blocks) {
  ModulationConfig cfg;
  cfg.blocks.assign(static_cast<std::size_t>(decoder_blocks), BlockModulation{});
  for (int b = 0; b < std::min(decoder_blocks, 2); ++b) cfg.affected.insert(b);
  return cfg;
}

ModulationConfig ModulationConfig::identity(int decoder_blocks) {
  ModulationConfig cfg;
  cfg.blocks.assign(static_cast<std::size_t>(decoder_blocks), BlockModulation{1.0, 1.0, 1.0});
  for (int b = 0; b < decoder_blocks; ++b) cfg.affected.insert(b);
  return cfg;
}

void ModulationConfig::validate(int decoder_blocks) const {
  if (blocks.size() != static_cast<std::size_t>(decoder_blocks))
    throw ArgumentError("modulation: expected " + std::to_string(decoder_blocks) +
                        " block entries, got " + std::to_string(blocks.size()));
  for (int b : affected)
    if (b < 0 || b >= decoder_blocks)
      throw ArgumentError("modulation: affected block " + std::to_string(b) + " does not exist");
  for (const auto& m : blocks) {
    if (!std::isfinite(m.backbone) || !std::isfinite(m.skip) || m.backbone < 0.0 || m.skip < 0.0)
      throw ArgumentError("modulation: factors must be finite and >= 0");
    if (!(m.radius >= 0.0)) throw ArgumentError("modulation: r_thresh must be >= 0");
  }
}

FeatureMap backbone_factor(const FeatureMap& backbone, double b) {
  if (backbone.channels < 1) throw ArgumentError("backbone_factor: need C >= 1");
  FeatureMap alpha(backbone.batch, 1, backbone.height, backbone.width);
  const std::size_t plane = backbone.plane();
  const double inv_c = 1.0 / static_cast<double>(backbone.channels);

  for (std::size_t n = 0; n < backbone.batch; ++n) {
    double* mean = &alpha.values[alpha.offset(n, 0)];
    for (std::size_t c = 0; c < backbone.channels; ++c) {
      const double* src = &backbone.values[backbone.offset(n, c)];
      for (std::size_t p = 0; p < plane; ++p) mean[p] += src[p];
    }
    for (std::size_t p = 0; p < plane; ++p) mean[p] *= inv_c;

    const auto [lo, hi] = std::minmax_element(mean, mean + plane);
    const double min = *lo, range = *hi - *lo;
    for (std::size_t p = 0; p < plane; ++p)
      mean[p] = range < 1e-12 ? 1.0 : (b - 1.0) * (mean[p] - min) / range + 1.0;
  }
  return alpha;
}

FeatureMap scale_backbone(const FeatureMap& backbone, const FeatureMap& alpha) {
  if (alpha.channels != 1 || alpha.batch != backbone.batch || alpha.height != backbone.height ||
      alpha.width != backbone.width)
    throw ArgumentError("scale_backbone: factor map must be batch x 1 x H x W");
  FeatureMap out = backbone;
  const std::size_t half = backbone.channels / 2;
  for (std::size_t n = 0; n < backbone.batch; ++n) {
    const double* a = &alpha.values[alpha.offset(n, 0)];
    for (std::size_t c = 0; c < half; ++c) {
      double* dst = &out.values[out.offset(n, c)];
      for (std::size_t p = 0; p < backbone.plane(); ++p) dst[p] *= a[p];
    }
  }
  return out;
}

FeatureMap spectral_modulate_skip(const FeatureMap& skip, double s, double r_thresh) {
  FeatureMap out = skip;
  const std::size_t h = skip.height, w = skip.width;
  if (skip.values.empty()) return out;

  // Radial mask around the centered DC index, shared by every channel.
  std::vector<double> gain(h * w, 1.0);
  const double cy = static_cast<double>(h / 2), cx = static_cast<double>(w / 2);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const double dy = static_cast<double>(y) - cy, dx = static_cast<double>(x) - cx;
      if (std::sqrt(dy * dy + dx * dx) < r_thresh) gain[y * w + x] = s;
    }

  double signal = 0.0, residue = 0.0;
  ComplexImage channel(h, w);
  for (std::size_t n = 0; n < skip.batch; ++n) {
    for (std::size_t c = 0; c < skip.channels; ++c) {
      const std::size_t off = skip.offset(n, c);
      for (std::size_t i = 0; i < h * w; ++i) channel[i] = Complex(skip.values[off + i], 0.0);
      KSpaceGrid k = fft2c(channel);
      for (std::size_t i = 0; i < k.size(); ++i) k[i] *= gain[i];
      const ComplexImage back = ifft2c(k);
      for (std::size_t i = 0; i < h * w; ++i) {
        out.values[off + i] = back[i].real();
        signal += skip.values[off + i] * skip.values[off + i];
        residue += back[i].imag() * back[i].imag();
      }
    }
  }
  if (std::sqrt(residue) > 1e-9 * std::sqrt(signal) + std::numeric_limits<double>::min())
    throw NumericalError("spectral_modulate_skip: imaginary residue " +
                         std::to_string(std::sqrt(residue)) + " exceeds tolerance");
  return out;
}

}  // namespace tcdiff
