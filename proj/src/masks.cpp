#include "vocxai/masks.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cmath>

#include "vocxai/pair.hpp"

namespace vocxai {

void ParallelPair::check_invariants() const {
  if (bona_fide.sample_rate != spoof.sample_rate) {
    throw PreconditionError("sample-rate mismatch: bona fide " +
                            std::to_string(bona_fide.sample_rate) + " Hz vs spoof " +
                            std::to_string(spoof.sample_rate) + " Hz");
  }
  if (aligned && bona_fide.size() != spoof.size()) {
    throw PreconditionError("aligned pair has unequal lengths");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(data.values().begin(), data.values().end(), 1));
}

Heatmap::Heatmap(Raster data) : data_(std::move(data)) {
  for (double v : data_.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("heatmap entries must lie in [0, 1]");
  }
}

Heatmap Heatmap::constant(std::size_t rows, std::size_t cols, double value) {
  return Heatmap(Raster(rows, cols, value));
}

Heatmap Heatmap::from_mask(const BinaryMask& mask) {
  Raster r(mask.rows(), mask.cols());
  auto src = mask.data.values();
  auto dst = r.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 1.0 : 0.0;
  return Heatmap(std::move(r));
}

BinaryMask complement(const BinaryMask& mask) {
  BinaryMask out = mask;
  for (auto& v : out.data.values()) v = v ? 0 : 1;
  return out;
}

BinaryMask dilate(const BinaryMask& mask, std::size_t freq_radius, std::size_t time_radius) {
  BinaryMask out{Grid<std::uint8_t>(mask.rows(), mask.cols(), 0), mask.origin};
  const auto rows = static_cast<std::ptrdiff_t>(mask.rows());
  const auto cols = static_cast<std::ptrdiff_t>(mask.cols());
  const auto fr = static_cast<std::ptrdiff_t>(freq_radius);
  const auto tr = static_cast<std::ptrdiff_t>(time_radius);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      if (!mask.data(r, c)) continue;
      for (std::ptrdiff_t rr = std::max<std::ptrdiff_t>(0, r - fr);
           rr <= std::min(rows - 1, r + fr); ++rr) {
        for (std::ptrdiff_t cc = std::max<std::ptrdiff_t>(0, c - tr);
             cc <= std::min(cols - 1, c + tr); ++cc) {
          out.data(rr, cc) = 1;
        }
      }
    }
  }
  return out;
}

}  // namespace vocxai
