#include "vocxai/annotation.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cmath>

#include "border.hpp"

namespace vocxai {

namespace {

std::vector<double> gaussian_taps(std::size_t size, double spread, bool spread_is_variance) {
  const double variance = spread_is_variance ? spread : spread * spread;
  const auto half = static_cast<std::ptrdiff_t>(size / 2);
  std::vector<double> taps(size);
  double sum = 0.0;
  for (std::ptrdiff_t i = -half; i <= half; ++i) {
    const double w = std::exp(-static_cast<double>(i * i) / (2.0 * variance));
    taps[static_cast<std::size_t>(i + half)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

Raster convolve_rows(const Raster& in, const std::vector<double>& taps) {
  // Along columns (time) within each row.
  Raster out(in.rows(), in.cols());
  const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    for (std::size_t c = 0; c < in.cols(); ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -half; k <= half; ++k) {
        const auto cc = detail::reflect_index(static_cast<std::ptrdiff_t>(c) + k, in.cols());
        acc += taps[static_cast<std::size_t>(k + half)] * in(r, cc);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Raster convolve_cols(const Raster& in, const std::vector<double>& taps) {
  // Along rows (frequency) within each column.
  Raster out(in.rows(), in.cols());
  const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    for (std::size_t c = 0; c < in.cols(); ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -half; k <= half; ++k) {
        const auto rr = detail::reflect_index(static_cast<std::ptrdiff_t>(r) + k, in.rows());
        acc += taps[static_cast<std::size_t>(k + half)] * in(rr, c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Raster min_max_scale(const Raster& in) {
  const auto [lo_it, hi_it] = std::minmax_element(in.values().begin(), in.values().end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  Raster out(in.rows(), in.cols(), 0.0);
  if (range <= 0.0) return out;
  auto src = in.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = std::clamp((src[i] - lo) / range, 0.0, 1.0);
  }
  return out;
}

BinaryMask threshold_mask(const Raster& values, double threshold, MaskOrigin origin) {
  BinaryMask mask{Grid<std::uint8_t>(values.rows(), values.cols(), 0), origin};
  auto src = values.values();
  auto dst = mask.data.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > threshold ? 1 : 0;
  return mask;
}

void check_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("quantile must lie strictly between 0 and 1");
}

}  // namespace

void GaussianKernel2D::validate() const {
  if (size_time == 0 || size_freq == 0 || size_time % 2 == 0 || size_freq % 2 == 0) {
    throw InvalidArgument("gaussian kernel sizes must be odd and >= 1");
  }
  if (!(var_time > 0.0) || !(var_freq > 0.0)) {
    throw InvalidArgument("gaussian kernel spreads must be positive");
  }
}

std::vector<double> GaussianKernel2D::time_taps() const {
  validate();
  return gaussian_taps(size_time, var_time, spread_is_variance);
}

std::vector<double> GaussianKernel2D::freq_taps() const {
  validate();
  return gaussian_taps(size_freq, var_freq, spread_is_variance);
}

void AnnotationConfig::validate() const {
  kernel.validate();
  check_quantile(quantile);
  if (!(denom_epsilon > 0.0)) throw InvalidArgument("denom_epsilon must be positive");
  if (!(log_floor > 0.0)) throw InvalidArgument("log_floor must be positive");
}

Raster smooth(const Raster& raster, const GaussianKernel2D& kernel) {
  if (raster.empty()) throw InvalidInput("smooth: empty raster");
  kernel.validate();
  if (kernel.size_time > raster.cols() || kernel.size_freq > raster.rows()) {
    throw InvalidArgument("smooth: kernel larger than raster");
  }
  return convolve_cols(convolve_rows(raster, kernel.time_taps()), kernel.freq_taps());
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidInput("quantile of an empty set");
  check_quantile(q);
  std::vector<double> sorted(values.begin(), values.end());
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(lo), sorted.end());
  const double a = sorted[lo];
  if (frac == 0.0 || lo + 1 == sorted.size()) return a;
  const double b = *std::min_element(sorted.begin() + static_cast<std::ptrdiff_t>(lo) + 1, sorted.end());
  return a + frac * (b - a);
}

Raster smoothed_abs_difference(const Raster& a, const Raster& b, const GaussianKernel2D& kernel) {
  require_same_shape(a, b, "smoothed_abs_difference");
  const Raster ga = smooth(a, kernel);
  const Raster gb = smooth(b, kernel);
  Raster out(a.rows(), a.cols());
  auto pa = ga.values();
  auto pb = gb.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::abs(pa[i] - pb[i]);
  return out;
}

Annotation annotate_magnitudes(const Raster& spoof_mag, const Raster& bona_mag,
                               const AnnotationConfig& cfg) {
  cfg.validate();
  if (!spoof_mag.same_shape(bona_mag)) {
    throw Error("internal: spoof and bona fide spectrograms differ in shape");
  }
  const Raster gs = smooth(spoof_mag, cfg.kernel);
  const Raster gb = smooth(bona_mag, cfg.kernel);
  Raster diff(gs.rows(), gs.cols());
  auto ps = gs.values();
  auto pb = gb.values();
  auto dst = diff.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = std::abs(ps[i] - pb[i]) / (std::abs(pb[i]) + cfg.denom_epsilon);
  }
  const double tau = quantile(diff.values(), cfg.quantile);
  Annotation out{threshold_mask(diff, tau, MaskOrigin::ground_truth), Heatmap(min_max_scale(diff)),
                 std::move(diff), tau};
  return out;
}

Annotation ground_truth_mask(const ParallelPair& pair, const AnnotationConfig& cfg,
                             const StftConfig& stft_cfg) {
  if (!pair.aligned) throw PreconditionError("ground_truth_mask: pair is not aligned");
  pair.check_invariants();
  const Spectrogram ss = stft(pair.spoof, stft_cfg);
  const Spectrogram sb = stft(pair.bona_fide, stft_cfg);
  if (cfg.magnitude_domain == MagnitudeDomain::log) {
    return annotate_magnitudes(to_log_magnitude(ss, cfg.log_floor),
                               to_log_magnitude(sb, cfg.log_floor), cfg);
  }
  return annotate_magnitudes(ss.magnitude, sb.magnitude, cfg);
}

Heatmap average_heatmaps(std::span<const Heatmap> maps) {
  if (maps.empty()) throw InvalidArgument("average_heatmaps: no maps");
  Raster mean = maps.front().data();
  for (std::size_t k = 1; k < maps.size(); ++k) {
    if (!maps[k].data().same_shape(mean)) {
      throw InvalidArgument("average_heatmaps: dimension mismatch");
    }
    // Running mean: identical inputs reproduce themselves bit for bit.
    const double inv = 1.0 / static_cast<double>(k + 1);
    auto src = maps[k].data().values();
    auto dst = mean.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += (src[i] - dst[i]) * inv;
  }
  for (double& v : mean.values()) v = std::clamp(v, 0.0, 1.0);
  return Heatmap(std::move(mean));
}

Binarization binarize(const Heatmap& heatmap, double q) {
  check_quantile(q);
  const Raster& data = heatmap.data();
  if (data.empty()) throw InvalidInput("binarize: empty heatmap");
  const auto [lo, hi] = std::minmax_element(data.values().begin(), data.values().end());
  const double tau = quantile(data.values(), q);
  return {threshold_mask(data, tau, MaskOrigin::binarized_prediction), tau, *lo == *hi};
}

}  // namespace vocxai
