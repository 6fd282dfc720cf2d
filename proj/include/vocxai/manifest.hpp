#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vocxai/injector.hpp"

namespace vocxai {

// One line of a pair manifest.
struct ManifestEntry {
  std::string utterance_id;
  std::filesystem::path bona_fide_path;  // resolved against the manifest directory
  std::filesystem::path spoof_path;
  std::string vocoder_id;
  bool needs_alignment = false;
};

struct ManifestProblem {
  std::string utterance_id;  // may be empty for unparseable lines
  std::string message;
};

// Pair manifest: JSON lines, optionally starting with {"dataset_name": ...}.
// Entries whose audio files are missing are moved to `problems`.
struct Manifest {
  std::string dataset_name;
  std::vector<ManifestEntry> entries;
  std::vector<ManifestProblem> problems;
};

// Throws FormatError for malformed JSON or duplicate utterance ids.
Manifest load_manifest(const std::filesystem::path& path);

std::string manifest_line(const ManifestEntry& e, const std::filesystem::path& relative_to);

// Entry of an injection manifest: a synthetic (or supplied) bona fide
// utterance and the artifacts to inject into it.
struct InjectionEntry {
  std::string utterance_id;
  double duration_s = 1.0;
  int sample_rate = 16000;
  std::optional<std::filesystem::path> source_path;  // bona fide WAV instead of synthesis
  std::optional<std::uint64_t> seed;                 // overrides the derived seed
  std::vector<ArtifactSpec> artifacts;
};

std::vector<InjectionEntry> load_injection_manifest(const std::filesystem::path& path);

}  // namespace vocxai
