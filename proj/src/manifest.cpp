#include "vocxai/manifest.hpp"
#include "vocxai/errors.hpp"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "file_util.hpp"

namespace vocxai {

namespace {

using json = nlohmann::json;

std::vector<std::pair<std::size_t, json>> read_json_lines(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  std::vector<std::pair<std::size_t, json>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw FormatError("not a JSON object");
      out.emplace_back(lineno, std::move(j));
    } catch (const std::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T field(const json& j, const char* key, const std::filesystem::path& path, std::size_t lineno) {
  if (!j.contains(key)) {
    throw FormatError(path.string() + ":" + std::to_string(lineno) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(path.string() + ":" + std::to_string(lineno) + ": field '" + key +
                      "' has the wrong type");
  }
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  Manifest m;
  const auto base = path.parent_path();
  std::set<std::string> seen;
  for (const auto& [lineno, j] : read_json_lines(path)) {
    if (j.contains("dataset_name") && !j.contains("utterance_id")) {
      m.dataset_name = field<std::string>(j, "dataset_name", path, lineno);
      continue;
    }
    ManifestEntry e;
    e.utterance_id = field<std::string>(j, "utterance_id", path, lineno);
    e.bona_fide_path = resolve(base, field<std::string>(j, "bona_fide_path", path, lineno));
    e.spoof_path = resolve(base, field<std::string>(j, "spoof_path", path, lineno));
    e.vocoder_id = j.contains("vocoder_id") ? field<std::string>(j, "vocoder_id", path, lineno) : "";
    e.needs_alignment = j.contains("needs_alignment") && field<bool>(j, "needs_alignment", path, lineno);
    if (e.utterance_id.empty()) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": empty utterance_id");
    }
    if (!seen.insert(e.utterance_id).second) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": duplicate utterance_id '" +
                        e.utterance_id + "'");
    }
    if (!std::filesystem::exists(e.bona_fide_path)) {
      m.problems.push_back({e.utterance_id, "missing bona fide audio " + e.bona_fide_path.string()});
    } else if (!std::filesystem::exists(e.spoof_path)) {
      m.problems.push_back({e.utterance_id, "missing spoof audio " + e.spoof_path.string()});
    } else {
      m.entries.push_back(std::move(e));
    }
  }
  return m;
}

std::string manifest_line(const ManifestEntry& e, const std::filesystem::path& relative_to) {
  nlohmann::ordered_json j;
  j["utterance_id"] = e.utterance_id;
  j["bona_fide_path"] = e.bona_fide_path.lexically_relative(relative_to).generic_string();
  j["spoof_path"] = e.spoof_path.lexically_relative(relative_to).generic_string();
  j["vocoder_id"] = e.vocoder_id;
  j["needs_alignment"] = e.needs_alignment;
  return j.dump();
}

std::vector<InjectionEntry> load_injection_manifest(const std::filesystem::path& path) {
  std::vector<InjectionEntry> out;
  const auto base = path.parent_path();
  std::set<std::string> seen;
  for (const auto& [lineno, j] : read_json_lines(path)) {
    InjectionEntry e;
    e.utterance_id = field<std::string>(j, "utterance_id", path, lineno);
    if (!seen.insert(e.utterance_id).second) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": duplicate utterance_id '" +
                        e.utterance_id + "'");
    }
    if (j.contains("duration_s")) e.duration_s = field<double>(j, "duration_s", path, lineno);
    if (j.contains("sample_rate")) e.sample_rate = field<int>(j, "sample_rate", path, lineno);
    if (j.contains("source_path")) {
      e.source_path = resolve(base, field<std::string>(j, "source_path", path, lineno));
    }
    if (j.contains("seed")) e.seed = field<std::uint64_t>(j, "seed", path, lineno);
    if (j.contains("artifacts")) {
      const json& arts = j.at("artifacts");
      if (!arts.is_array()) {
        throw FormatError(path.string() + ":" + std::to_string(lineno) + ": artifacts must be a list");
      }
      for (const json& a : arts) {
        ArtifactSpec s;
        try {
          s.kind = parse_artifact_kind(field<std::string>(a, "kind", path, lineno));
        } catch (const InvalidArgument& ex) {
          throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
        }
        s.t_start = field<std::size_t>(a, "t_start", path, lineno);
        s.t_end = field<std::size_t>(a, "t_end", path, lineno);
        s.f_low = field<std::size_t>(a, "f_low", path, lineno);
        s.f_high = field<std::size_t>(a, "f_high", path, lineno);
        s.strength_db = field<double>(a, "strength_db", path, lineno);
        e.artifacts.push_back(s);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace vocxai
