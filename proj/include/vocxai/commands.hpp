#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vocxai/config.hpp"
#include "vocxai/manifest.hpp"
#include "vocxai/pair.hpp"

// Pipeline commands behind the `vocxai` executable. Each returns a process
// exit status and writes human-readable progress/errors to `log`.
namespace vocxai::cli {

enum ExitCode : int {
  kOk = 0,
  kEntryErrors = 1,       // some entries failed (or --strict with any failure)
  kInvalidInput = 2,      // unusable manifest, config, id sets, file format
  kScorerUnavailable = 3,
};

struct InjectArgs {
  std::filesystem::path spec_manifest;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  bool strict = false;
  ToolkitConfig config;
};

struct AnnotateArgs {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  bool render = false;
  bool strict = false;
  std::size_t workers = 1;
  ToolkitConfig config;
};

struct EvaluateArgs {
  std::filesystem::path pred_dir;
  std::filesystem::path gt_dir;
  std::filesystem::path out_report;  // writes <out>.csv and <out>.json
  ToolkitConfig config;              // evaluation.* used
};

struct BandScorerArgs {
  double f_low_hz = 0.0;
  double f_high_hz = 0.0;
  double ref_energy = 1.0;
};

struct FaithfulnessArgs {
  std::filesystem::path manifest;
  std::filesystem::path heatmap_dir;
  std::vector<std::string> scorer_cmd;  // external scorer argv
  std::optional<BandScorerArgs> band_scorer;  // built-in scorer instead
  std::filesystem::path out_report;
  std::size_t workers = 1;
  ToolkitConfig config;
};

struct RenderArgs {
  std::filesystem::path hmap;
  std::filesystem::path out_pgm;
  bool binarize = false;
  double quantile = 0.95;
};

int cmd_inject(const InjectArgs& args, std::ostream& log);
int cmd_annotate(const AnnotateArgs& args, std::ostream& log);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& log);
int cmd_faithfulness(const FaithfulnessArgs& args, std::ostream& log);
int cmd_render(const RenderArgs& args, std::ostream& log);

// Reads both members of a manifest entry and aligns them when requested and
// enabled. Unaligned entries of unequal length are rejected.
ParallelPair load_pair(const ManifestEntry& entry, const ToolkitConfig& cfg);

// "<dir>/<id>.hmap"-style id: file name up to the first '.'.
std::string id_from_filename(const std::filesystem::path& p);

// Splits a command line on whitespace, honouring single and double quotes.
std::vector<std::string> split_command(std::string_view text);

}  // namespace vocxai::cli
