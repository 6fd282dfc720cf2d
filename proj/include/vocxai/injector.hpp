#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vocxai/masks.hpp"
#include "vocxai/pair.hpp"
#include "vocxai/spectral.hpp"

namespace vocxai {

enum class ArtifactKind { harmonic_removal, band_attenuation, noise_patch };

ArtifactKind parse_artifact_kind(std::string_view name);
std::string_view artifact_kind_name(ArtifactKind kind);

// Rectangular time-frequency region [t_start, t_end) x [f_low, f_high) on the
// STFT grid, with the artifact applied inside it.
struct ArtifactSpec {
  ArtifactKind kind = ArtifactKind::band_attenuation;
  std::size_t t_start = 0;
  std::size_t t_end = 0;
  std::size_t f_low = 0;
  std::size_t f_high = 0;
  double strength_db = 20.0;

  std::size_t area() const { return (t_end - t_start) * (f_high - f_low); }
  // Throws InvalidArgument unless the region is non-empty and lies within a
  // bins x frames grid, and strength_db > 0.
  void validate(std::size_t bins, std::size_t frames) const;
};

struct InjectionRecord {
  ParallelPair pair;  // (istft(stft(x)), istft(modified)), aligned
  BinaryMask oracle_mask;
  std::vector<ArtifactSpec> specs;
};

// Harmonic test signal standing in for bona fide speech: an f0 random walk
// in 100-250 Hz with 10 harmonics of 1/h amplitude, shaped into syllables,
// plus a noise floor 40 dB below the voiced peak. Deterministic in `seed`.
Waveform synthesize_voice_like(double duration_s, int sample_rate, std::uint64_t seed);

struct InjectOptions {
  std::size_t harmonic_ridges = 3;  // ridges removed per frame by harmonic_removal
  std::uint64_t seed = 0;           // noise_patch randomness
};

// Applies each artifact to the STFT magnitude of x, in order:
//   harmonic_removal  zero the strongest per-frame local maxima (+/-1 bin)
//   band_attenuation  scale by 10^(-strength_db/20)
//   noise_patch       add uniform noise of amplitude floor * 10^(strength_db/20),
//                     floor being the median magnitude of the region
// then resynthesizes. The bona fide side is istft(stft(x)) so both members
// share the same round trip.
InjectionRecord inject(const Waveform& x, std::span<const ArtifactSpec> specs,
                       const StftConfig& stft_cfg, const InjectOptions& opts = {});

}  // namespace vocxai
