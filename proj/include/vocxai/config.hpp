#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "vocxai/alignment.hpp"
#include "vocxai/annotation.hpp"
#include "vocxai/metrics.hpp"
#include "vocxai/spectral.hpp"

namespace vocxai {

// Flat key/value view of a TOML document ("section.key" -> value). Supports
// the subset the toolkit's config files use: [section] tables, comments,
// strings, booleans, integers and floats.
using TomlValue = std::variant<std::string, bool, std::int64_t, double>;
using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_toml(std::string_view text);

struct FaithfulnessSettings {
  bool binarize = false;
  double quantile = 0.95;
  double tolerance = 1e-6;
};

// Every tunable of the pipeline. Precedence: command-line flags > config
// file > these defaults.
struct ToolkitConfig {
  StftConfig stft;
  AnnotationConfig annotation;
  AlignmentConfig alignment;
  SegmentationConfig evaluation;
  FaithfulnessSettings faithfulness;
};

// Applies the keys of `table` on top of `cfg`. Unknown keys and wrongly
// typed values raise ConfigError.
void apply_config(ToolkitConfig& cfg, const TomlTable& table);

ToolkitConfig load_config(const std::filesystem::path& path);

}  // namespace vocxai
