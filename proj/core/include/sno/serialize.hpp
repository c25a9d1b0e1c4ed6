#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sno/series.hpp"

namespace sno {

// .specf container: one line of JSON followed by a little-endian float64 blob.
// Header: {"axes":[{"basis":"chebyshev"|"fourier"|"index","size":N,
// "real_signal":bool},...],"dtype":"f64"}. The blob stores (re, im) pairs in
// row-major order. "index" marks a plain enumeration axis with no spectral
// meaning; dataset files use a leading index axis to stack samples.

struct SpecfAxis {
  std::string basis;  // "chebyshev" | "fourier" | "index"
  std::size_t size = 0;
  bool real_signal = true;
};

struct SpecfTensor {
  std::vector<SpecfAxis> axes;
  std::vector<cplx> data;

  std::size_t size() const;
};

void write_specf(const std::filesystem::path& path, const SpecfTensor& t);
SpecfTensor read_specf(const std::filesystem::path& path);

SpecfTensor to_specf(const CoeffSeries& s);
CoeffSeries series_from_specf(const SpecfTensor& t);

// Stacks same-shape series along a leading index axis / splits them back.
SpecfTensor stack_to_specf(const std::vector<CoeffSeries>& list);
std::vector<CoeffSeries> unstack_specf(const SpecfTensor& t);

}  // namespace sno
