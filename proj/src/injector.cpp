#include "vocxai/injector.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vocxai/rng.hpp"

namespace vocxai {

namespace {

constexpr int kHarmonics = 10;
constexpr double kF0Min = 100.0;
constexpr double kF0Max = 250.0;

double reflect_into(double v, double lo, double hi) {
  while (v < lo || v > hi) v = v < lo ? 2 * lo - v : 2 * hi - v;
  return v;
}

// Syllable-like amplitude envelope: Hann bumps separated by short pauses.
std::vector<double> syllable_envelope(std::size_t n, int sample_rate, Rng& rng) {
  std::vector<double> env(n, 0.0);
  std::size_t pos = static_cast<std::size_t>(rng.uniform(0.02, 0.08) * sample_rate);
  while (pos < n) {
    const auto len = static_cast<std::size_t>(rng.uniform(0.12, 0.30) * sample_rate);
    const double amp = rng.uniform(0.4, 1.0);
    for (std::size_t i = 0; i < len && pos + i < n; ++i) {
      env[pos + i] = amp * (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                  static_cast<double>(len)));
    }
    pos += len + static_cast<std::size_t>(rng.uniform(0.03, 0.12) * sample_rate);
  }
  return env;
}

void remove_harmonics(Raster& mag, const ArtifactSpec& spec, std::size_t ridges) {
  std::vector<std::pair<double, std::size_t>> peaks;
  const std::size_t bins = mag.rows();
  for (std::size_t t = spec.t_start; t < spec.t_end; ++t) {
    peaks.clear();
    for (std::size_t k = spec.f_low; k < spec.f_high; ++k) {
      const double v = mag(k, t);
      const double below = k > 0 ? mag(k - 1, t) : -1.0;
      const double above = k + 1 < bins ? mag(k + 1, t) : -1.0;
      if (v > below && v >= above && v > 0.0) peaks.emplace_back(v, k);
    }
    const std::size_t keep = std::min(ridges, peaks.size());
    std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(keep), peaks.end(),
                      [](const auto& a, const auto& b) {
                        return a.first > b.first || (a.first == b.first && a.second < b.second);
                      });
    for (std::size_t p = 0; p < keep; ++p) {
      const std::size_t k = peaks[p].second;
      const std::size_t lo = std::max(spec.f_low, k > 0 ? k - 1 : 0);
      const std::size_t hi = std::min(spec.f_high - 1, k + 1);
      for (std::size_t kk = lo; kk <= hi; ++kk) mag(kk, t) = 0.0;
    }
  }
}

void attenuate(Raster& mag, const ArtifactSpec& spec) {
  const double gain = std::pow(10.0, -spec.strength_db / 20.0);
  for (std::size_t k = spec.f_low; k < spec.f_high; ++k) {
    for (std::size_t t = spec.t_start; t < spec.t_end; ++t) mag(k, t) *= gain;
  }
}

void add_noise_patch(Raster& mag, const ArtifactSpec& spec, Rng& rng) {
  std::vector<double> region;
  region.reserve(spec.area());
  for (std::size_t k = spec.f_low; k < spec.f_high; ++k) {
    for (std::size_t t = spec.t_start; t < spec.t_end; ++t) region.push_back(mag(k, t));
  }
  const auto mid = region.begin() + static_cast<std::ptrdiff_t>(region.size() / 2);
  std::nth_element(region.begin(), mid, region.end());
  const double amplitude = *mid * std::pow(10.0, spec.strength_db / 20.0);
  for (std::size_t k = spec.f_low; k < spec.f_high; ++k) {
    for (std::size_t t = spec.t_start; t < spec.t_end; ++t) mag(k, t) += amplitude * rng.uniform();
  }
}

}  // namespace

ArtifactKind parse_artifact_kind(std::string_view name) {
  if (name == "harmonic_removal") return ArtifactKind::harmonic_removal;
  if (name == "band_attenuation") return ArtifactKind::band_attenuation;
  if (name == "noise_patch") return ArtifactKind::noise_patch;
  throw InvalidArgument("unknown artifact kind: " + std::string(name));
}

std::string_view artifact_kind_name(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::harmonic_removal: return "harmonic_removal";
    case ArtifactKind::band_attenuation: return "band_attenuation";
    case ArtifactKind::noise_patch: return "noise_patch";
  }
  return "unknown";
}

void ArtifactSpec::validate(std::size_t bins, std::size_t frames) const {
  if (!(t_start < t_end && t_end <= frames)) {
    throw InvalidArgument("artifact time range [" + std::to_string(t_start) + ", " +
                          std::to_string(t_end) + ") outside 0.." + std::to_string(frames));
  }
  if (!(f_low < f_high && f_high <= bins)) {
    throw InvalidArgument("artifact frequency range [" + std::to_string(f_low) + ", " +
                          std::to_string(f_high) + ") outside 0.." + std::to_string(bins));
  }
  if (!(strength_db > 0.0)) throw InvalidArgument("artifact strength_db must be positive");
}

Waveform synthesize_voice_like(double duration_s, int sample_rate, std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw InvalidArgument("duration must be positive");
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  if (n == 0) throw InvalidArgument("duration shorter than one sample");

  Rng pitch_rng(derive_seed(seed, "voice/f0"));
  Rng env_rng(derive_seed(seed, "voice/envelope"));
  Rng noise_rng(derive_seed(seed, "voice/noise"));

  // f0 knots every 10 ms, linearly interpolated per sample.
  const std::size_t knot_step = std::max<std::size_t>(1, static_cast<std::size_t>(sample_rate / 100));
  std::vector<double> knots(n / knot_step + 2);
  knots[0] = pitch_rng.uniform(120.0, 200.0);
  for (std::size_t i = 1; i < knots.size(); ++i) {
    knots[i] = reflect_into(knots[i - 1] + 3.0 * pitch_rng.normal(), kF0Min, kF0Max);
  }
  const std::vector<double> env = syllable_envelope(n, sample_rate, env_rng);

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  const double nyquist = sample_rate / 2.0;
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i / knot_step;
    const double frac = static_cast<double>(i % knot_step) / static_cast<double>(knot_step);
    const double f0 = knots[k] + frac * (knots[k + 1] - knots[k]);
    double v = 0.0;
    for (int h = 1; h <= kHarmonics; ++h) {
      if (h * f0 >= nyquist) break;
      v += std::sin(h * phase) / h;
    }
    out.samples[i] = env[i] * v;
    phase = std::fmod(phase + 2.0 * std::numbers::pi * f0 / sample_rate, 2.0 * std::numbers::pi);
  }

  double peak = 0.0;
  for (double s : out.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) peak = 1.0;
  const double noise = 0.01 * peak;  // -40 dB
  for (double& s : out.samples) s += noise * noise_rng.normal();

  double max_abs = 0.0;
  for (double s : out.samples) max_abs = std::max(max_abs, std::abs(s));
  const double gain = 0.5 / max_abs;
  for (double& s : out.samples) s *= gain;
  return out;
}

InjectionRecord inject(const Waveform& x, std::span<const ArtifactSpec> specs,
                       const StftConfig& stft_cfg, const InjectOptions& opts) {
  Spectrogram clean = stft(x, stft_cfg);
  const std::size_t bins = clean.bins();
  const std::size_t frames = clean.frames();
  for (const auto& s : specs) s.validate(bins, frames);

  Spectrogram modified = clean;
  BinaryMask oracle{Grid<std::uint8_t>(bins, frames, 0), MaskOrigin::injected_oracle};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ArtifactSpec& s = specs[i];
    switch (s.kind) {
      case ArtifactKind::harmonic_removal:
        remove_harmonics(modified.magnitude, s, opts.harmonic_ridges);
        break;
      case ArtifactKind::band_attenuation:
        attenuate(modified.magnitude, s);
        break;
      case ArtifactKind::noise_patch: {
        Rng rng(derive_seed(opts.seed, "inject/noise_patch/" + std::to_string(i)));
        add_noise_patch(modified.magnitude, s, rng);
        break;
      }
    }
    for (std::size_t k = s.f_low; k < s.f_high; ++k) {
      for (std::size_t t = s.t_start; t < s.t_end; ++t) oracle.data(k, t) = 1;
    }
  }

  InjectionRecord rec;
  rec.pair.bona_fide = istft(clean);
  rec.pair.spoof = istft(modified);
  rec.pair.aligned = true;
  rec.oracle_mask = std::move(oracle);
  rec.specs.assign(specs.begin(), specs.end());
  return rec;
}

}  // namespace vocxai
