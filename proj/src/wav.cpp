#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "byte_io.hpp"
#include "file_util.hpp"
#include "vocxai/errors.hpp"
#include "vocxai/waveform.hpp"

namespace vocxai {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  const std::string where = path.string();

  if (n < 12 || bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0) {
    throw FormatError(where + ": not a RIFF/WAVE file");
  }

  FmtChunk fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const std::string id = bytes.substr(pos, 4);
    std::size_t len = detail::get_u32(p + pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (len < 16 || body + 16 > n) throw FormatError(where + ": truncated fmt chunk");
      fmt.format = detail::get_u16(p + body);
      fmt.channels = detail::get_u16(p + body + 2);
      fmt.sample_rate = detail::get_u32(p + body + 4);
      fmt.bits = detail::get_u16(p + body + 14);
      if (fmt.format == kFormatExtensible) {
        if (len < 40 || body + 40 > n) throw FormatError(where + ": truncated extensible fmt chunk");
        fmt.format = detail::get_u16(p + body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      // Some writers leave the data size unset when streaming.
      len = std::min(len, n - body);
      data = p + body;
      data_len = len;
    }
    pos = body + len + (len & 1);
  }

  if (!have_fmt) throw FormatError(where + ": missing fmt chunk");
  if (data == nullptr) throw FormatError(where + ": missing data chunk");
  if (fmt.channels != 1) {
    throw FormatError(where + ": expected mono audio, found " + std::to_string(fmt.channels) +
                      " channels");
  }
  if (fmt.sample_rate == 0) throw FormatError(where + ": sample rate is zero");

  Waveform wave;
  wave.sample_rate = static_cast<int>(fmt.sample_rate);
  if (fmt.format == kFormatPcm && fmt.bits == 16) {
    wave.samples.resize(data_len / 2);
    for (std::size_t i = 0; i < wave.samples.size(); ++i) {
      const auto v = static_cast<std::int16_t>(detail::get_u16(data + 2 * i));
      wave.samples[i] = v / 32768.0;
    }
  } else if (fmt.format == kFormatFloat && fmt.bits == 32) {
    wave.samples.resize(data_len / 4);
    for (std::size_t i = 0; i < wave.samples.size(); ++i) {
      wave.samples[i] = detail::get_f32(data + 4 * i);
    }
  } else {
    throw FormatError(where + ": unsupported sample format (format tag " +
                      std::to_string(fmt.format) + ", " + std::to_string(fmt.bits) +
                      " bits); need 16-bit PCM or 32-bit float");
  }
  return wave;
}

void write_wav(const std::filesystem::path& path, const Waveform& wave, WavEncoding encoding) {
  if (wave.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  const bool is_float = encoding == WavEncoding::float32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint32_t block = bits / 8;
  const auto data_len = static_cast<std::uint32_t>(wave.samples.size() * block);

  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  detail::put_u32(out, 36 + data_len);
  out += "WAVE";
  out += "fmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, is_float ? kFormatFloat : kFormatPcm);
  detail::put_u16(out, 1);
  detail::put_u32(out, static_cast<std::uint32_t>(wave.sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(wave.sample_rate) * block);
  detail::put_u16(out, static_cast<std::uint16_t>(block));
  detail::put_u16(out, bits);
  out += "data";
  detail::put_u32(out, data_len);
  for (double s : wave.samples) {
    if (is_float) {
      detail::put_f32(out, static_cast<float>(s));
    } else {
      // Same 32768 scale as the reader; +1.0 saturates at 32767.
      const long q = std::clamp(std::lround(std::clamp(s, -1.0, 1.0) * 32768.0), -32768L, 32767L);
      detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }
  detail::write_file_atomic(path, out);
}

}  // namespace vocxai
