#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vocxai/grid.hpp"
#include "vocxai/waveform.hpp"

namespace vocxai {

enum class WindowKind { hann, rectangular };

WindowKind parse_window(std::string_view name);
std::string_view window_name(WindowKind kind);

// Analysis/synthesis parameters. Only configurations whose squared-window
// overlap-add envelope is strictly positive are accepted, which is what makes
// istft(stft(x)) reproduce x.
struct StftConfig {
  std::size_t fft_size = 512;
  std::size_t hop = 128;
  WindowKind window = WindowKind::hann;
  bool center = true;  // reflect-pad fft_size/2 samples on both ends

  std::size_t num_bins() const { return fft_size / 2 + 1; }

  // Throws ConfigError for non power-of-two sizes, hops that do not divide
  // fft_size, or Hann windows with less than 50% overlap.
  void validate() const;

  bool operator==(const StftConfig&) const = default;
};

// Frames produced for a signal of `num_samples` samples: the padded signal is
// extended with zeros so that every sample falls under at least one frame.
std::size_t frame_count(std::size_t num_samples, const StftConfig& cfg);

// Periodic window of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

struct Spectrogram {
  Raster magnitude;  // bins x frames, >= 0
  Raster phase;      // bins x frames, radians in (-pi, pi]
  StftConfig config;
  int sample_rate = 16000;
  std::size_t signal_length = 0;  // samples in the analysed waveform

  std::size_t bins() const { return magnitude.rows(); }
  std::size_t frames() const { return magnitude.cols(); }
};

// Unnormalized one-sided STFT. A bin with zero magnitude has phase 0.
Spectrogram stft(const Waveform& x, const StftConfig& cfg);

// Weighted overlap-add inverse; divides by the squared-window envelope and
// trims the centre padding so the output has spec.signal_length samples.
Waveform istft(const Spectrogram& spec);

inline constexpr double kDefaultLogFloor = 1e-10;

Raster to_log_magnitude(const Spectrogram& spec, double floor = kDefaultLogFloor);

// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

}  // namespace vocxai
