#pragma once

#include <filesystem>
#include <vector>

namespace vocxai {

// Mono PCM signal with amplitudes nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class WavEncoding { pcm16, float32 };

// Reads a mono RIFF/WAVE file in 16-bit PCM or 32-bit IEEE float. Stereo and
// other sample formats are rejected with FormatError.
Waveform read_wav(const std::filesystem::path& path);

// PCM16 output clips to [-1, 1] and scales by 32768 like the reader, so +1.0
// saturates at 32767.
void write_wav(const std::filesystem::path& path, const Waveform& wave,
               WavEncoding encoding = WavEncoding::float32);

}  // namespace vocxai
