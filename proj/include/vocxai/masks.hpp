#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "vocxai/grid.hpp"

namespace vocxai {

enum class MaskOrigin : std::uint8_t { ground_truth, binarized_prediction, injected_oracle };

// Boolean raster stored as 0/1 bytes.
struct BinaryMask {
  Grid<std::uint8_t> data;
  MaskOrigin origin = MaskOrigin::ground_truth;

  std::size_t rows() const { return data.rows(); }
  std::size_t cols() const { return data.cols(); }
  bool at(std::size_t r, std::size_t c) const { return data(r, c) != 0; }
  std::size_t count() const;
};

// Continuous attribution raster with every entry in [0, 1].
class Heatmap {
 public:
  Heatmap() = default;
  // Throws InvalidArgument if any entry is outside [0, 1] or NaN.
  explicit Heatmap(Raster data);

  static Heatmap constant(std::size_t rows, std::size_t cols, double value);
  static Heatmap from_mask(const BinaryMask& mask);

  const Raster& data() const { return data_; }
  std::size_t rows() const { return data_.rows(); }
  std::size_t cols() const { return data_.cols(); }
  double operator()(std::size_t r, std::size_t c) const { return data_(r, c); }

 private:
  Raster data_;
};

BinaryMask complement(const BinaryMask& mask);

// Dilates a mask by a rectangular structuring element of half-extents
// (freq_radius, time_radius).
BinaryMask dilate(const BinaryMask& mask, std::size_t freq_radius, std::size_t time_radius);

}  // namespace vocxai
