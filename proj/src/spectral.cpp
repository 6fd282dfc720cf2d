#include "vocxai/spectral.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fft.hpp"

namespace vocxai {

namespace {

constexpr double kEnvelopeGuard = 1e-12;

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::size_t left_pad(const StftConfig& cfg) { return cfg.center ? cfg.fft_size / 2 : 0; }

// Signal laid out on the analysis grid: reflect padding when centred, then
// zeros up to the end of the last frame.
std::vector<double> pad_signal(const std::vector<double>& x, const StftConfig& cfg,
                               std::size_t frames) {
  const std::size_t pad = left_pad(cfg);
  const std::size_t n = x.size();
  std::vector<double> out((frames - 1) * cfg.hop + cfg.fft_size, 0.0);
  for (std::size_t i = 0; i < pad; ++i) out[i] = x[pad - i];
  std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t i = 0; i < pad && pad + n + i < out.size(); ++i) {
    out[pad + n + i] = x[n - 2 - i];
  }
  return out;
}

}  // namespace

WindowKind parse_window(std::string_view name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "rectangular" || name == "rect") return WindowKind::rectangular;
  throw ConfigError("unknown window: " + std::string(name));
}

std::string_view window_name(WindowKind kind) {
  return kind == WindowKind::hann ? "hann" : "rectangular";
}

void StftConfig::validate() const {
  if (!is_power_of_two(fft_size)) {
    throw ConfigError("fft_size must be a power of two >= 2, got " + std::to_string(fft_size));
  }
  if (hop == 0 || hop > fft_size || fft_size % hop != 0) {
    throw ConfigError("hop must divide fft_size (fft_size=" + std::to_string(fft_size) +
                      ", hop=" + std::to_string(hop) + ")");
  }
  // A periodic Hann window vanishes at its first sample, so without overlap
  // the squared-window envelope has zeros and the inverse is not exact.
  if (window == WindowKind::hann && fft_size / hop < 2) {
    throw ConfigError("hann window needs at least 50% overlap for overlap-add reconstruction");
  }
}

std::size_t frame_count(std::size_t num_samples, const StftConfig& cfg) {
  const std::size_t padded = num_samples + 2 * left_pad(cfg);
  if (padded < cfg.fft_size) return 0;
  return 1 + (padded - cfg.fft_size + cfg.hop - 1) / cfg.hop;
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::hann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n));
    }
  }
  return w;
}

double wrap_phase(double angle) {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(angle, 2.0 * pi);  // [-pi, pi]
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

Spectrogram stft(const Waveform& x, const StftConfig& cfg) {
  cfg.validate();
  if (x.empty()) throw InvalidInput("stft: empty waveform");
  if (x.sample_rate <= 0) throw InvalidInput("stft: sample rate must be positive");
  const std::size_t n = cfg.fft_size;
  if (cfg.center && x.size() <= n / 2) {
    throw InvalidInput("stft: centred analysis needs more than fft_size/2 = " +
                       std::to_string(n / 2) + " samples, got " + std::to_string(x.size()));
  }
  if (!cfg.center && x.size() < n) {
    throw InvalidInput("stft: signal shorter than one frame (" + std::to_string(x.size()) +
                       " < " + std::to_string(n) + ")");
  }

  const std::size_t frames = frame_count(x.size(), cfg);
  const std::size_t bins = cfg.num_bins();
  const std::vector<double> padded = pad_signal(x.samples, cfg, frames);
  const std::vector<double> window = make_window(cfg.window, n);

  Spectrogram spec{Raster(bins, frames), Raster(bins, frames), cfg, x.sample_rate, x.size()};
  detail::RealFft fft(n);
  std::vector<double> frame(n);
  std::vector<std::complex<double>> bins_out(bins);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = padded.data() + t * cfg.hop;
    for (std::size_t i = 0; i < n; ++i) frame[i] = src[i] * window[i];
    fft.forward(frame, bins_out);
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = std::abs(bins_out[k]);
      spec.magnitude(k, t) = mag;
      spec.phase(k, t) = mag == 0.0 ? 0.0 : wrap_phase(std::arg(bins_out[k]));
    }
  }
  return spec;
}

Waveform istft(const Spectrogram& spec) {
  const StftConfig& cfg = spec.config;
  cfg.validate();
  const std::size_t n = cfg.fft_size;
  const std::size_t bins = cfg.num_bins();
  require_same_shape(spec.magnitude, spec.phase, "istft");
  if (spec.bins() != bins) {
    throw InvalidArgument("istft: expected " + std::to_string(bins) + " bins, got " +
                          std::to_string(spec.bins()));
  }
  const std::size_t frames = spec.frames();
  if (frames == 0) throw InvalidInput("istft: spectrogram has no frames");
  const std::size_t total = (frames - 1) * cfg.hop + n;
  const std::size_t start = left_pad(cfg);
  if (start + spec.signal_length > total) {
    throw InvalidArgument("istft: signal_length exceeds the frames' coverage");
  }

  const std::vector<double> window = make_window(cfg.window, n);
  std::vector<double> acc(total, 0.0);
  std::vector<double> envelope(total, 0.0);
  detail::RealFft fft(n);
  std::vector<std::complex<double>> bins_in(bins);
  std::vector<double> frame(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < bins; ++k) {
      bins_in[k] = std::polar(spec.magnitude(k, t), spec.phase(k, t));
    }
    fft.inverse(bins_in, frame);
    double* dst = acc.data() + t * cfg.hop;
    double* env = envelope.data() + t * cfg.hop;
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] += frame[i] * scale * window[i];
      env[i] += window[i] * window[i];
    }
  }

  Waveform out;
  out.sample_rate = spec.sample_rate;
  out.samples.resize(spec.signal_length);
  for (std::size_t i = 0; i < spec.signal_length; ++i) {
    out.samples[i] = acc[start + i] / std::max(envelope[start + i], kEnvelopeGuard);
  }
  return out;
}

Raster to_log_magnitude(const Spectrogram& spec, double floor) {
  if (!(floor > 0.0)) throw InvalidArgument("log floor must be positive");
  Raster out(spec.magnitude.rows(), spec.magnitude.cols());
  auto src = spec.magnitude.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::log(std::max(src[i], floor));
  return out;
}

}  // namespace vocxai
