// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace tcdiff {

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  Complex* as_complex() { return reinterpret_cast<Complex*>(data); }

  fftw_complex* data;
};

// The FFTW planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans live for the process lifetime.
class PlanCache {
 public:
  fftw_plan get(std::size_t h, std::size_t w, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(h, w, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    FftwBuffer in(h * w), out(h * w);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), in.data,
                                      out.data, sign, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw: failed to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// Moves index `shift` of each axis of src to index 0 of dst (a cyclic shift).
// ifftshift uses shift = n/2, fftshift uses shift = n - n/2.
void cyclic_copy(const Complex* src, Complex* dst, std::size_t h, std::size_t w,
                 std::size_t shift_h, std::size_t shift_w) {
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t sr = (r + shift_h) % h;
    for (std::size_t c = 0; c < w; ++c) dst[r * w + c] = src[sr * w + (c + shift_w) % w];
  }
}

template <typename Out, typename In>
Out centered_transform(const In& in, int sign) {
  const std::size_t h = in.height(), w = in.width();
  if (h == 0 || w == 0) throw ArgumentError("fft2c: zero-sized grid");
  const std::size_t n = h * w;

  FftwBuffer src(n), dst(n);
  cyclic_copy(in.values().data(), src.as_complex(), h, w, h / 2, w / 2);
  fftw_execute_dft(plan_cache().get(h, w, sign), src.data, dst.data);

  Out out(h, w);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  cyclic_copy(dst.as_complex(), out.values().data(), h, w, h - h / 2, w - w / 2);
  for (auto& v : out.values()) v *= scale;
  return out;
}

}  // namespace

KSpaceGrid fft2c(const ComplexImage& img) {
  return centered_transform<KSpaceGrid>(img, FFTW_FORWARD);
}

ComplexImage ifft2c(const KSpaceGrid& k) {
  return centered_transform<ComplexImage>(k, FFTW_BACKWARD);
}

}  // namespace tcdiff
