// Reference scorer process for the JSONL scorer protocol. Scores are either a
// constant or a deterministic hash of the WAV file bytes. Extra switches make
// it misbehave on purpose so the session error paths can be exercised.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "vocxai/errors.hpp"
#include "vocxai/scorer.hpp"
#include "vocxai/waveform.hpp"
#include "file_util.hpp"

namespace {

using vocxai::protocol::Response;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double hash_score(const std::string& bytes) {
  return static_cast<double>(fnv1a64(bytes) >> 11) * 0x1.0p-53;
}

Response answer(const std::string& line, std::optional<double> constant) {
  Response r;
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_object() && j.contains("id") && j["id"].is_string()) r.id = j["id"].get<std::string>();
  if (j.is_discarded() || !j.is_object() || r.id.empty() || !j.contains("audio_path") ||
      !j["audio_path"].is_string()) {
    r.error = "malformed request";
    return r;
  }
  const std::filesystem::path path = j["audio_path"].get<std::string>();
  if (!std::filesystem::is_regular_file(path)) {
    r.error = "audio not found";
    return r;
  }
  try {
    vocxai::read_wav(path);
    const std::string bytes = vocxai::detail::read_file(path);
    r.score = constant ? *constant : hash_score(bytes);
  } catch (const vocxai::Error&) {
    r.error = "unreadable audio";
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic stub scorer speaking the add-scorer JSONL protocol"};
  std::optional<double> constant;
  std::string orientation = "spoof_high";
  bool no_handshake = false;
  bool bad_handshake = false;
  int exit_after = -1;
  int delay_ms = 0;
  app.add_option("--constant", constant, "Return this score for every readable file")
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--hash", "Hash-derived score (default)");
  app.add_option("--orientation", orientation, "Orientation announced in the handshake")
      ->check(CLI::IsMember({"spoof_high", "bonafide_high"}));
  app.add_flag("--no-handshake", no_handshake, "Stay silent instead of greeting");
  app.add_flag("--bad-handshake", bad_handshake, "Greet with a malformed line");
  app.add_option("--exit-after", exit_after, "Exit after answering N requests");
  app.add_option("--delay-ms", delay_ms, "Sleep before each response");
  CLI11_PARSE(app, argc, argv);

  std::ios::sync_with_stdio(false);
  if (no_handshake) {
    std::string ignored;
    while (std::getline(std::cin, ignored)) {
    }
    return 0;
  }
  if (bad_handshake) {
    std::cout << "hello" << std::endl;
    return 1;
  }
  vocxai::protocol::Handshake hs;
  hs.orientation = vocxai::parse_orientation(orientation);
  std::cout << vocxai::protocol::encode_handshake(hs) << std::endl;

  std::string line;
  int answered = 0;
  while (answered != exit_after && std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    std::cout << vocxai::protocol::encode_response(answer(line, constant)) << std::endl;
    ++answered;
  }
  return 0;
}
