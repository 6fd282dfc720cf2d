#include <gtest/gtest.h>

#include <cstring>
#include <fstream>

#include "fixtures.hpp"
#include "vocxai/config.hpp"
#include "vocxai/errors.hpp"
#include "vocxai/hmap.hpp"
#include "vocxai/manifest.hpp"
#include "vocxai/pgm.hpp"
#include "vocxai/waveform.hpp"

using namespace vocxai;
using fixtures::TempDir;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

template <typename T>
void put(std::string& s, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  s.append(b, sizeof(T));
}

// Minimal PCM16 RIFF file with the given channel count.
std::string pcm16_wav(std::uint16_t channels, std::uint32_t rate, const std::vector<std::int16_t>& data) {
  std::string s = "RIFF";
  put<std::uint32_t>(s, 36 + 2 * std::uint32_t(data.size()));
  s += "WAVEfmt ";
  put<std::uint32_t>(s, 16);
  put<std::uint16_t>(s, 1);
  put<std::uint16_t>(s, channels);
  put<std::uint32_t>(s, rate);
  put<std::uint32_t>(s, rate * channels * 2);
  put<std::uint16_t>(s, std::uint16_t(channels * 2));
  put<std::uint16_t>(s, 16);
  s += "data";
  put<std::uint32_t>(s, 2 * std::uint32_t(data.size()));
  for (auto v : data) put<std::int16_t>(s, v);
  return s;
}

std::string format_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const FormatError& e) {
    return e.what();
  }
  return "<no FormatError>";
}

}  // namespace

TEST(Wav, Float32RoundTripIsExactForFloats) {
  TempDir dir("wav");
  Waveform w;
  w.sample_rate = 22050;
  for (int i = 0; i < 500; ++i) w.samples.push_back(static_cast<float>(std::sin(i * 0.1) * 0.7));
  write_wav(dir.path() / "a.wav", w, WavEncoding::float32);
  const Waveform r = read_wav(dir.path() / "a.wav");
  EXPECT_EQ(r.sample_rate, 22050);
  EXPECT_EQ(r.samples, w.samples);
}

TEST(Wav, Pcm16RoundTripWithinQuantization) {
  TempDir dir("wav");
  Waveform w;
  for (int i = 0; i < 500; ++i) w.samples.push_back(std::sin(i * 0.05) * 0.9);
  w.samples.push_back(1.5);  // clips
  write_wav(dir.path() / "a.wav", w, WavEncoding::pcm16);
  const Waveform r = read_wav(dir.path() / "a.wav");
  ASSERT_EQ(r.size(), w.size());
  for (std::size_t i = 0; i + 1 < w.size(); ++i) EXPECT_NEAR(r.samples[i], w.samples[i], 0.5 / 32768);
  EXPECT_DOUBLE_EQ(r.samples.back(), 32767.0 / 32768.0);
}

TEST(Wav, RejectsStereoAndGarbage) {
  TempDir dir("wav");
  write_text(dir.path() / "st.wav", pcm16_wav(2, 16000, {1, 2, 3, 4}));
  EXPECT_NE(format_error([&] { read_wav(dir.path() / "st.wav"); }).find("mono"), std::string::npos);
  write_text(dir.path() / "mono.wav", pcm16_wav(1, 8000, {0, 16384, -32768}));
  const Waveform m = read_wav(dir.path() / "mono.wav");
  EXPECT_EQ(m.sample_rate, 8000);
  EXPECT_EQ(m.samples, (std::vector<double>{0.0, 0.5, -1.0}));
  write_text(dir.path() / "junk.wav", "this is not audio at all, not even close");
  EXPECT_NE(format_error([&] { read_wav(dir.path() / "junk.wav"); }).find("RIFF"), std::string::npos);
  EXPECT_THROW(read_wav(dir.path() / "absent.wav"), IoError);
}

TEST(Hmap, RoundTrips) {
  Rng rng(301);
  const Heatmap h(fixtures::random_raster(rng, 5, 7));
  const auto dh = hmap::decode(hmap::encode(h));
  ASSERT_TRUE(std::holds_alternative<Heatmap>(dh));
  const Raster& back = std::get<Heatmap>(dh).data();
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back.values()[i], static_cast<double>(static_cast<float>(h.data().values()[i])));
  }
  const BinaryMask m = fixtures::random_mask(rng, 4, 9, 0.5);
  const std::string bytes = hmap::encode(m);
  EXPECT_EQ(bytes.size(), hmap::kHeaderSize + 36);
  EXPECT_EQ(bytes.substr(0, 4), "HMAP");
  const auto dm = hmap::decode(bytes);
  ASSERT_TRUE(std::holds_alternative<BinaryMask>(dm));
  EXPECT_EQ(fixtures::to_bool(std::get<BinaryMask>(dm)), fixtures::to_bool(m));

  TempDir dir("hmap");
  hmap::write(dir.path() / "m.hmap", m);
  hmap::write(dir.path() / "h.hmap", h);
  EXPECT_EQ(fixtures::to_bool(hmap::read_mask(dir.path() / "m.hmap")), fixtures::to_bool(m));
  EXPECT_EQ(hmap::read_as_heatmap(dir.path() / "m.hmap").data()(0, 0), m.at(0, 0) ? 1.0 : 0.0);
  EXPECT_THROW(hmap::read_mask(dir.path() / "h.hmap"), FormatError);
}

TEST(Hmap, MalformedInputsNameTheField) {
  Rng rng(302);
  const std::string good = hmap::encode(fixtures::random_mask(rng, 3, 3, 0.5));
  const auto msg = [](std::string bytes) { return format_error([&] { hmap::decode(bytes); }); };
  const auto contains = [](const std::string& s, const char* what) { return s.find(what) != std::string::npos; };

  EXPECT_TRUE(contains(msg(good.substr(0, 10)), "truncated"));
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_TRUE(contains(msg(bad), "magic"));
  bad = good;
  bad[4] = 2;
  EXPECT_TRUE(contains(msg(bad), "version"));
  bad = good;
  bad[5] = 7;
  EXPECT_TRUE(contains(msg(bad), "dtype"));
  bad = good;
  bad[6] = 1;
  EXPECT_TRUE(contains(msg(bad), "reserved"));
  EXPECT_TRUE(contains(msg(good.substr(0, good.size() - 1)), "payload shorter than rows×cols"));
  EXPECT_TRUE(contains(msg(good + "x"), "payload longer"));
  bad = good;
  bad[hmap::kHeaderSize] = 2;
  EXPECT_TRUE(contains(msg(bad), "0/1"));
  bad = good;
  std::memset(bad.data() + 8, 0, 4);
  EXPECT_TRUE(contains(msg(bad), "rows/cols"));
}

TEST(Pgm, QuantizesAndFlipsRows) {
  Raster r(2, 2);
  r(0, 0) = 0;
  r(0, 1) = 1;
  r(1, 0) = 2;
  r(1, 1) = 3;
  const PgmImage img = quantize_for_display(r);
  EXPECT_EQ(img.width, 2u);
  EXPECT_EQ(img.height, 2u);
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{170, 255, 0, 85}));
  EXPECT_EQ(quantize_for_display(Raster(3, 2, 0.4)).pixels, std::vector<std::uint8_t>(6, 0));

  TempDir dir("pgm");
  render_pgm(r, dir.path() / "a.pgm");
  const std::string bytes = read_bytes(dir.path() / "a.pgm");
  EXPECT_EQ(bytes.substr(0, 2), "P5");
  const PgmImage back = read_pgm(dir.path() / "a.pgm");
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Manifest, LoadsAndResolvesPaths) {
  TempDir dir("manifest");
  fs::create_directories(dir.path() / "audio");
  write_text(dir.path() / "audio/a.wav", "x");
  write_text(dir.path() / "audio/b.wav", "x");
  write_text(dir.path() / "m.jsonl",
             "{\"dataset_name\":\"toy\"}\n"
             "\n"
             "{\"utterance_id\":\"u1\",\"bona_fide_path\":\"audio/a.wav\",\"spoof_path\":\"audio/b.wav\","
             "\"vocoder_id\":\"hifigan\",\"needs_alignment\":true}\n"
             "{\"utterance_id\":\"u2\",\"bona_fide_path\":\"audio/a.wav\",\"spoof_path\":\"audio/gone.wav\"}\n");
  const Manifest m = load_manifest(dir.path() / "m.jsonl");
  EXPECT_EQ(m.dataset_name, "toy");
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_EQ(m.entries[0].bona_fide_path, dir.path() / "audio/a.wav");
  EXPECT_EQ(m.entries[0].vocoder_id, "hifigan");
  EXPECT_TRUE(m.entries[0].needs_alignment);
  ASSERT_EQ(m.problems.size(), 1u);
  EXPECT_EQ(m.problems[0].utterance_id, "u2");

  const std::string line = manifest_line(m.entries[0], dir.path());
  EXPECT_NE(line.find("\"bona_fide_path\":\"audio/a.wav\""), std::string::npos);
}

TEST(Manifest, Errors) {
  TempDir dir("manifest");
  write_text(dir.path() / "dup.jsonl",
             "{\"utterance_id\":\"u\",\"bona_fide_path\":\"a\",\"spoof_path\":\"b\"}\n"
             "{\"utterance_id\":\"u\",\"bona_fide_path\":\"a\",\"spoof_path\":\"b\"}\n");
  EXPECT_NE(format_error([&] { load_manifest(dir.path() / "dup.jsonl"); }).find("duplicate"), std::string::npos);
  write_text(dir.path() / "bad.jsonl", "{not json\n");
  EXPECT_NE(format_error([&] { load_manifest(dir.path() / "bad.jsonl"); }).find(":1:"), std::string::npos);
  write_text(dir.path() / "miss.jsonl", "{\"utterance_id\":\"u\",\"spoof_path\":\"b\"}\n");
  EXPECT_NE(format_error([&] { load_manifest(dir.path() / "miss.jsonl"); }).find("bona_fide_path"),
            std::string::npos);
}

TEST(InjectionManifest, ParsesArtifacts) {
  const auto entries = load_injection_manifest(fs::path(VOCXAI_TEST_DATA_DIR) / "golden/spec.jsonl");
  ASSERT_EQ(entries.size(), 4u);
  EXPECT_EQ(entries[0].utterance_id, "g01");
  ASSERT_EQ(entries[0].artifacts.size(), 1u);
  EXPECT_EQ(entries[0].artifacts[0].kind, ArtifactKind::band_attenuation);
  EXPECT_EQ(entries[0].artifacts[0].t_end, 80u);
  EXPECT_DOUBLE_EQ(entries[1].duration_s, 1.25);

  TempDir dir("inj");
  write_text(dir.path() / "k.jsonl", "{\"utterance_id\":\"x\",\"artifacts\":[{\"kind\":\"echo\"}]}\n");
  EXPECT_NE(format_error([&] { load_injection_manifest(dir.path() / "k.jsonl"); }).find("echo"),
            std::string::npos);
}

TEST(Config, ParsesTomlSubset) {
  const TomlTable t = parse_toml(
      "# comment\n"
      "[stft]\n"
      "fft_size = 1024   # trailing\n"
      "hop = 256\n"
      "window = \"hann\"\n"
      "center = true\n"
      "[annotation]\n"
      "quantile = 0.9\n"
      "kernel_var_freq = 2.5e0\n");
  EXPECT_EQ(std::get<std::int64_t>(t.at("stft.fft_size")), 1024);
  EXPECT_EQ(std::get<std::string>(t.at("stft.window")), "hann");
  EXPECT_EQ(std::get<bool>(t.at("stft.center")), true);
  EXPECT_DOUBLE_EQ(std::get<double>(t.at("annotation.quantile")), 0.9);

  ToolkitConfig cfg;
  apply_config(cfg, t);
  EXPECT_EQ(cfg.stft.fft_size, 1024u);
  EXPECT_EQ(cfg.stft.hop, 256u);
  EXPECT_DOUBLE_EQ(cfg.annotation.quantile, 0.9);
  EXPECT_DOUBLE_EQ(cfg.annotation.kernel.var_freq, 2.5);
  EXPECT_EQ(cfg.annotation.kernel.size_time, 3u);  // untouched default
}

TEST(Config, RejectsUnknownAndMistyped) {
  ToolkitConfig cfg;
  EXPECT_THROW(apply_config(cfg, parse_toml("[stft]\nfft_sise = 512\n")), ConfigError);
  EXPECT_THROW(apply_config(cfg, parse_toml("[stft]\nhop = \"128\"\n")), ConfigError);
  EXPECT_THROW(apply_config(cfg, parse_toml("[annotation]\nmagnitude_domain = \"db\"\n")), ConfigError);
  EXPECT_THROW(parse_toml("[stft\n"), ConfigError);
  EXPECT_THROW(parse_toml("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_toml("just words\n"), ConfigError);
}
