// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/fastmri.hpp"

#include <hdf5.h>

#include <array>
#include <string>

#include "tcdiff/fft.hpp"
#include "tcdiff/mask.hpp"

namespace tcdiff {

namespace {

// Owns one hid_t and closes it with the matching H5*close.
class Handle {
 public:
  using Closer = herr_t (*)(hid_t);
  Handle(hid_t id, Closer closer) : id_(id), closer_(closer) {}
  ~Handle() {
    if (id_ >= 0) closer_(id_);
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;

  hid_t get() const { return id_; }
  bool valid() const { return id_ >= 0; }

 private:
  hid_t id_;
  Closer closer_;
};

struct ComplexPair {
  double r;
  double i;
};

hid_t make_pair_type(hid_t member) {
  const std::size_t member_size = H5Tget_size(member);
  hid_t type = H5Tcreate(H5T_COMPOUND, 2 * member_size);
  H5Tinsert(type, "r", 0, member);
  H5Tinsert(type, "i", member_size, member);
  return type;
}

void silence_hdf5() {
  static const bool done = [] {
    H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr);
    return true;
  }();
  (void)done;
}

}  // namespace

KSpaceGrid fftshift(const KSpaceGrid& natural) {
  const std::size_t h = natural.height(), w = natural.width();
  KSpaceGrid out(h, w);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) out((r + h / 2) % h, (c + w / 2) % w) = natural(r, c);
  return out;
}

Volume read_fastmri_volume(const std::filesystem::path& path) {
  silence_hdf5();
  const std::string where = path.string();
  Handle file(H5Fopen(where.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
  if (!file.valid()) throw FormatError(where + ": not a readable HDF5 file");
  if (H5Lexists(file.get(), "kspace", H5P_DEFAULT) <= 0)
    throw FormatError(where + ": missing dataset \"kspace\"");

  Handle dataset(H5Dopen2(file.get(), "kspace", H5P_DEFAULT), H5Dclose);
  if (!dataset.valid()) throw FormatError(where + ": cannot open dataset \"kspace\"");
  Handle space(H5Dget_space(dataset.get()), H5Sclose);
  const int rank = H5Sget_simple_extent_ndims(space.get());
  if (rank != 3)
    throw FormatError(where + ": \"kspace\" has rank " + std::to_string(rank) +
                      ", expected 3 (slices x H x W)");
  std::array<hsize_t, 3> dims{};
  H5Sget_simple_extent_dims(space.get(), dims.data(), nullptr);

  Handle stored_type(H5Dget_type(dataset.get()), H5Tclose);
  if (H5Tget_class(stored_type.get()) != H5T_COMPOUND || H5Tget_nmembers(stored_type.get()) != 2)
    throw FormatError(where + ": \"kspace\" is not a complex {r, i} compound");

  Handle mem_type(make_pair_type(H5T_NATIVE_DOUBLE), H5Tclose);
  const std::size_t slices = dims[0], h = dims[1], w = dims[2];
  if (slices == 0 || h == 0 || w == 0) throw FormatError(where + ": empty \"kspace\"");
  std::vector<ComplexPair> buffer(slices * h * w);
  if (H5Dread(dataset.get(), mem_type.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, buffer.data()) < 0)
    throw FormatError(where + ": failed to read \"kspace\"");

  Volume volume;
  for (std::size_t s = 0; s < slices; ++s) {
    KSpaceGrid natural(h, w);
    for (std::size_t i = 0; i < h * w; ++i) {
      const auto& p = buffer[s * h * w + i];
      natural[i] = Complex(p.r, p.i);
    }
    KSpaceGrid centered = fftshift(natural);
    volume.references.push_back(magnitude(zero_fill(centered)));
    volume.kspace.push_back(std::move(centered));
  }
  return volume;
}

void write_fastmri_kspace(const std::filesystem::path& path,
                          const std::vector<std::vector<Complex>>& slices, std::size_t height,
                          std::size_t width) {
  silence_hdf5();
  const std::string where = path.string();
  std::vector<float> buffer;
  buffer.reserve(slices.size() * height * width * 2);
  for (const auto& slice : slices) {
    if (slice.size() != height * width) throw ArgumentError("fastmri: slice size mismatch");
    for (const auto& v : slice) {
      buffer.push_back(static_cast<float>(v.real()));
      buffer.push_back(static_cast<float>(v.imag()));
    }
  }

  Handle file(H5Fcreate(where.c_str(), H5F_ACC_TRUNC, H5P_DEFAULT, H5P_DEFAULT), H5Fclose);
  if (!file.valid()) throw FormatError(where + ": cannot create HDF5 file");
  const std::array<hsize_t, 3> dims{slices.size(), height, width};
  Handle space(H5Screate_simple(3, dims.data(), nullptr), H5Sclose);
  Handle file_type(make_pair_type(H5T_IEEE_F32LE), H5Tclose);
  Handle mem_type(make_pair_type(H5T_NATIVE_FLOAT), H5Tclose);
  Handle dataset(H5Dcreate2(file.get(), "kspace", file_type.get(), space.get(), H5P_DEFAULT,
                            H5P_DEFAULT, H5P_DEFAULT),
                 H5Dclose);
  if (!dataset.valid() ||
      H5Dwrite(dataset.get(), mem_type.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, buffer.data()) < 0)
    throw FormatError(where + ": failed to write \"kspace\"");
}

Volume drop_initial_slices(Volume volume, std::size_t n) {
  if (volume.slices() <= n)
    throw ArgumentError("drop_initial_slices: volume has " + std::to_string(volume.slices()) +
                        " slices, need more than " + std::to_string(n));
  const auto off = static_cast<std::ptrdiff_t>(n);
  volume.kspace.erase(volume.kspace.begin(), volume.kspace.begin() + off);
  volume.references.erase(volume.references.begin(), volume.references.begin() + off);
  return volume;
}

}  // namespace tcdiff
