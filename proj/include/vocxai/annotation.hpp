#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vocxai/grid.hpp"
#include "vocxai/masks.hpp"
#include "vocxai/pair.hpp"
#include "vocxai/spectral.hpp"

namespace vocxai {

// Separable Gaussian smoothing kernel. Sizes and spreads are given per axis:
// time runs along raster columns, frequency along rows.
struct GaussianKernel2D {
  std::size_t size_time = 3;
  std::size_t size_freq = 11;
  double var_time = 3.0;
  double var_freq = 5.0;
  // When false, var_time/var_freq are read as standard deviations instead.
  bool spread_is_variance = true;

  void validate() const;
  std::vector<double> time_taps() const;  // unit sum
  std::vector<double> freq_taps() const;  // unit sum
};

enum class MagnitudeDomain { linear, log };

struct AnnotationConfig {
  GaussianKernel2D kernel;
  double quantile = 0.95;
  double denom_epsilon = 1e-8;
  MagnitudeDomain magnitude_domain = MagnitudeDomain::linear;
  double log_floor = kDefaultLogFloor;

  void validate() const;
};

// Gaussian smoothing with half-sample symmetric ("reflect") borders.
// Throws InvalidArgument when a kernel axis is longer than the raster axis.
Raster smooth(const Raster& raster, const GaussianKernel2D& kernel);

// Quantile by linear interpolation between order statistics at (n-1)*q.
double quantile(std::span<const double> values, double q);

struct Annotation {
  BinaryMask mask;                // difference > threshold
  Heatmap heatmap;                // min-max scaled difference
  Raster normalized_difference;   // |G(Ms) - G(Mb)| / (|G(Mb)| + eps)
  double threshold = 0.0;
};

// Numerator of the normalized difference, |G(a) - G(b)|.
Raster smoothed_abs_difference(const Raster& a, const Raster& b, const GaussianKernel2D& kernel);

// Annotation from precomputed magnitude rasters (linear or log, per cfg).
Annotation annotate_magnitudes(const Raster& spoof_mag, const Raster& bona_mag,
                               const AnnotationConfig& cfg);

// Ground-truth explanation for an aligned parallel pair.
Annotation ground_truth_mask(const ParallelPair& pair, const AnnotationConfig& cfg,
                             const StftConfig& stft_cfg);

// Elementwise mean, e.g. over repeated stochastic predictions.
Heatmap average_heatmaps(std::span<const Heatmap> maps);

struct Binarization {
  BinaryMask mask;
  double threshold = 0.0;
  bool degenerate = false;  // constant input; mask is all false
};

Binarization binarize(const Heatmap& heatmap, double q);

}  // namespace vocxai
