// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "tcdiff/grid.hpp"

namespace tcdiff {

/// Slices of one single-coil subject: centered K-space plus the magnitude of
/// the fully sampled zero-filled image, which serves as the reference.
struct Volume {
  std::vector<KSpaceGrid> kspace;
  std::vector<RealImage> references;

  std::size_t slices() const { return kspace.size(); }
};

/// Reads dataset "kspace" (complex64 compound {r, i}, slices x H x W) from a
/// fastMRI single-coil HDF5 file. Stored data is natural-order; it is
/// fftshifted on ingestion so the DC coefficient lands at (H/2, W/2).
Volume read_fastmri_volume(const std::filesystem::path& path);

/// Writes natural-order K-space slices in the fastMRI layout. Used for test
/// fixtures.
void write_fastmri_kspace(const std::filesystem::path& path,
                          const std::vector<std::vector<Complex>>& slices, std::size_t height,
                          std::size_t width);

/// Removes the first n slices, keeping order. Requires more than n slices.
Volume drop_initial_slices(Volume volume, std::size_t n = 5);

/// Natural-order <-> centered index shifts.
KSpaceGrid fftshift(const KSpaceGrid& natural);

}  // namespace tcdiff
