#include "vocxai/commands.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "vocxai/alignment.hpp"
#include "vocxai/annotation.hpp"
#include "vocxai/faithfulness.hpp"
#include "vocxai/hmap.hpp"
#include "vocxai/injector.hpp"
#include "vocxai/pgm.hpp"
#include "vocxai/report.hpp"
#include "vocxai/rng.hpp"

namespace vocxai::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct EntryError {
  std::string id;
  std::string message;
};

// Exit status for entry-processing commands.
int entry_status(std::size_t successes, const std::vector<EntryError>& errors, bool strict) {
  if (errors.empty()) return kOk;
  if (!strict && successes > 0) return kOk;
  return kEntryErrors;
}

ordered_json errors_json(const std::vector<EntryError>& errors) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : errors) {
    ordered_json o;
    o["utterance_id"] = e.id;
    o["error"] = e.message;
    arr.push_back(std::move(o));
  }
  return arr;
}

void sort_errors(std::vector<EntryError>& errors) {
  std::sort(errors.begin(), errors.end(),
            [](const EntryError& a, const EntryError& b) { return a.id < b.id; });
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

fs::path report_stem(const fs::path& out) {
  fs::path stem = out;
  if (stem.extension() == ".csv" || stem.extension() == ".json") stem.replace_extension();
  return stem;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::map<std::string, fs::path> list_hmaps(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".hmap") continue;
    const std::string id = id_from_filename(e.path());
    if (!out.emplace(id, e.path()).second) {
      throw FormatError("two HMAP files map to utterance id '" + id + "' in " + dir.string());
    }
  }
  return out;
}

double sparsity(const BinaryMask& m) {
  return static_cast<double>(m.count()) / static_cast<double>(m.rows() * m.cols());
}

}  // namespace

std::string id_from_filename(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.substr(0, name.find('.'));
}

std::vector<std::string> split_command(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  bool have = false;
  char quote = 0;
  for (char c : text) {
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
      have = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (have) out.push_back(std::move(cur));
      cur.clear();
      have = false;
    } else {
      cur.push_back(c);
      have = true;
    }
  }
  if (quote != 0) throw InvalidArgument("unterminated quote in command");
  if (have) out.push_back(std::move(cur));
  return out;
}

ParallelPair load_pair(const ManifestEntry& entry, const ToolkitConfig& cfg) {
  ParallelPair pair;
  pair.utterance_id = entry.utterance_id;
  pair.vocoder_id = entry.vocoder_id;
  pair.bona_fide = read_wav(entry.bona_fide_path);
  pair.spoof = read_wav(entry.spoof_path);
  pair.check_invariants();
  if (entry.needs_alignment && cfg.alignment.enabled) {
    const AlignmentResult res = dtw_align(pair, cfg.alignment.frame, cfg.alignment.hop);
    return apply_alignment(pair, res, cfg.stft.fft_size);
  }
  if (pair.bona_fide.size() != pair.spoof.size()) {
    throw PreconditionError("length mismatch (" + std::to_string(pair.bona_fide.size()) + " vs " +
                            std::to_string(pair.spoof.size()) +
                            " samples) on a pair not flagged for alignment");
  }
  pair.aligned = true;
  return pair;
}

// --- inject ---------------------------------------------------------------------

int cmd_inject(const InjectArgs& args, std::ostream& log) {
  std::vector<InjectionEntry> entries;
  try {
    args.config.stft.validate();
    entries = load_injection_manifest(args.spec_manifest);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  if (entries.empty()) {
    log << "error: no entries\n";
    return kInvalidInput;
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.utterance_id < b.utterance_id; });

  const fs::path audio_dir = args.out_dir / "audio";
  const fs::path oracle_dir = args.out_dir / "oracle";
  try {
    ensure_dir(audio_dir);
    ensure_dir(oracle_dir);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  std::vector<EntryError> errors;
  std::vector<ManifestEntry> written;
  ordered_json items = ordered_json::array();
  for (const auto& entry : entries) {
    try {
      const std::uint64_t seed = entry.seed.value_or(derive_seed(args.seed, "inject/" + entry.utterance_id));
      const Waveform x = entry.source_path ? read_wav(*entry.source_path)
                                           : synthesize_voice_like(entry.duration_s, entry.sample_rate, seed);
      const InjectionRecord rec =
          inject(x, entry.artifacts, args.config.stft, {3, derive_seed(seed, "inject/noise")});
      ManifestEntry m{entry.utterance_id, audio_dir / (entry.utterance_id + ".bona.wav"),
                      audio_dir / (entry.utterance_id + ".spoof.wav"), "injector", false};
      write_wav(m.bona_fide_path, rec.pair.bona_fide, WavEncoding::float32);
      write_wav(m.spoof_path, rec.pair.spoof, WavEncoding::float32);
      hmap::write(oracle_dir / (entry.utterance_id + ".hmap"), rec.oracle_mask);
      ordered_json item;
      item["utterance_id"] = entry.utterance_id;
      item["seed"] = seed;
      item["samples"] = rec.pair.spoof.size();
      item["oracle_bins"] = rec.oracle_mask.count();
      items.push_back(std::move(item));
      written.push_back(std::move(m));
    } catch (const Error& e) {
      errors.push_back({entry.utterance_id, e.what()});
      log << "entry " << entry.utterance_id << ": " << e.what() << "\n";
    }
  }

  std::string manifest = ordered_json{{"dataset_name", "synthetic-injection"}}.dump() + "\n";
  for (const auto& m : written) manifest += manifest_line(m, args.out_dir) + "\n";
  ordered_json summary;
  summary["entries"] = entries.size();
  summary["written"] = written.size();
  summary["items"] = std::move(items);
  summary["errors"] = errors_json(errors);
  try {
    detail::write_file_atomic(args.out_dir / "pairs.jsonl", manifest);
    detail::write_file_atomic(args.out_dir / "inject_summary.json", summary.dump(2) + "\n");
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  log << "injected " << written.size() << "/" << entries.size() << " entries into " << args.out_dir.string()
      << "\n";
  return entry_status(written.size(), errors, args.strict);
}

// --- annotate ---------------------------------------------------------------------

int cmd_annotate(const AnnotateArgs& args, std::ostream& log) {
  Manifest manifest;
  try {
    args.config.stft.validate();
    args.config.annotation.validate();
    manifest = load_manifest(args.manifest);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  if (manifest.entries.empty() && manifest.problems.empty()) {
    log << "error: no entries\n";
    return kInvalidInput;
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const auto& a, const auto& b) { return a.utterance_id < b.utterance_id; });

  const fs::path mask_dir = args.out_dir / "masks";
  const fs::path heat_dir = args.out_dir / "heatmaps";
  const fs::path render_dir = args.out_dir / "renders";
  try {
    ensure_dir(mask_dir);
    ensure_dir(heat_dir);
    if (args.render) ensure_dir(render_dir);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  std::vector<EntryError> errors;
  for (const auto& p : manifest.problems) errors.push_back({p.utterance_id, p.message});

  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<double>> sparsities(n);
  std::vector<std::string> entry_errors(n);
  parallel_for(n, args.workers, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      const ParallelPair pair = load_pair(entry, args.config);
      const Annotation ann = ground_truth_mask(pair, args.config.annotation, args.config.stft);
      hmap::write(mask_dir / (entry.utterance_id + ".hmap"), ann.mask);
      hmap::write(heat_dir / (entry.utterance_id + ".hmap"), ann.heatmap);
      if (args.render) {
        render_pgm(Heatmap::from_mask(ann.mask).data(), render_dir / (entry.utterance_id + ".mask.pgm"));
        render_pgm(ann.heatmap.data(), render_dir / (entry.utterance_id + ".heat.pgm"));
      }
      sparsities[i] = sparsity(ann.mask);
    } catch (const Error& e) {
      entry_errors[i] = e.what();
    }
  });

  ordered_json items = ordered_json::array();
  std::size_t written = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& id = manifest.entries[i].utterance_id;
    if (!entry_errors[i].empty()) {
      errors.push_back({id, entry_errors[i]});
      log << "entry " << id << ": " << entry_errors[i] << "\n";
      continue;
    }
    ++written;
    ordered_json item;
    item["utterance_id"] = id;
    item["sparsity"] = *sparsities[i];
    items.push_back(std::move(item));
  }
  sort_errors(errors);

  ordered_json summary;
  summary["dataset_name"] = manifest.dataset_name;
  summary["entries"] = n + manifest.problems.size();
  summary["written"] = written;
  summary["skipped"] = errors.size();
  summary["items"] = std::move(items);
  summary["errors"] = errors_json(errors);
  try {
    detail::write_file_atomic(args.out_dir / "summary.json", summary.dump(2) + "\n");
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  log << "annotated " << written << "/" << n + manifest.problems.size() << " entries\n";
  return entry_status(written, errors, args.strict);
}

// --- evaluate ----------------------------------------------------------------------

int cmd_evaluate(const EvaluateArgs& args, std::ostream& log) {
  try {
    const auto preds = list_hmaps(args.pred_dir);
    const auto gts = list_hmaps(args.gt_dir);
    std::vector<std::string> missing;
    std::vector<std::string> extra;
    for (const auto& [id, _] : gts) {
      if (!preds.contains(id)) missing.push_back(id);
    }
    for (const auto& [id, _] : preds) {
      if (!gts.contains(id)) extra.push_back(id);
    }
    if (!missing.empty() || !extra.empty()) {
      log << "error: prediction and ground-truth id sets differ\n";
      for (const auto& id : missing) log << "  missing prediction: " << id << "\n";
      for (const auto& id : extra) log << "  extra prediction: " << id << "\n";
      return kInvalidInput;
    }
    if (gts.empty()) {
      log << "error: no entries\n";
      return kInvalidInput;
    }

    std::vector<std::string> ids;
    std::vector<Prediction> pred_maps;
    std::vector<BinaryMask> gt_masks;
    for (const auto& [id, path] : gts) {
      ids.push_back(id);
      gt_masks.push_back(hmap::read_mask(path));
      std::visit([&](auto&& p) { pred_maps.emplace_back(std::move(p)); }, hmap::read(preds.at(id)));
    }
    const SegmentationReport rep = evaluate_dataset(pred_maps, gt_masks, args.config.evaluation, ids);
    const fs::path stem = report_stem(args.out_report);
    if (stem.has_parent_path()) ensure_dir(stem.parent_path());
    detail::write_file_atomic(fs::path(stem.string() + ".csv"), segmentation_csv(rep));
    detail::write_file_atomic(fs::path(stem.string() + ".json"), segmentation_json(rep));
    log << "evaluated " << rep.n_items << " items: GDice " << format_fixed(100 * rep.gdice, 2) << ", F1 "
        << format_fixed(100 * rep.f1, 2) << ", IoU " << format_fixed(100 * rep.iou, 2) << ", FBound "
        << format_fixed(100 * rep.fbound, 2) << ", SSIM " << format_fixed(100 * rep.ssim, 2) << "\n";
    return kOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

// --- faithfulness ------------------------------------------------------------------

int cmd_faithfulness(const FaithfulnessArgs& args, std::ostream& log) {
  Manifest manifest;
  try {
    args.config.stft.validate();
    manifest = load_manifest(args.manifest);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  if (manifest.entries.empty() && manifest.problems.empty()) {
    log << "error: no entries\n";
    return kInvalidInput;
  }
  if (args.scorer_cmd.empty() == !args.band_scorer.has_value()) {
    log << "error: exactly one of an external scorer command or the band-energy scorer is required\n";
    return kInvalidInput;
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const auto& a, const auto& b) { return a.utterance_id < b.utterance_id; });

  std::vector<EntryError> errors;
  for (const auto& p : manifest.problems) errors.push_back({p.utterance_id, p.message});
  std::vector<ParallelPair> pairs;
  std::vector<Heatmap> heatmaps;
  for (const auto& entry : manifest.entries) {
    try {
      const fs::path hpath = args.heatmap_dir / (entry.utterance_id + ".hmap");
      if (!fs::exists(hpath)) throw IoError("no heatmap " + hpath.string());
      Heatmap h = hmap::read_as_heatmap(hpath);
      ParallelPair pair = load_pair(entry, args.config);
      const std::size_t frames = frame_count(pair.spoof.size(), args.config.stft);
      if (h.rows() != args.config.stft.num_bins() || h.cols() != frames) {
        throw InvalidArgument("heatmap is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                              ", spectrogram is " + std::to_string(args.config.stft.num_bins()) + "x" +
                              std::to_string(frames));
      }
      pairs.push_back(std::move(pair));
      heatmaps.push_back(std::move(h));
    } catch (const Error& e) {
      errors.push_back({entry.utterance_id, e.what()});
      log << "entry " << entry.utterance_id << ": " << e.what() << "\n";
    }
  }
  if (pairs.empty()) {
    log << "error: no usable entries\n";
    return kEntryErrors;
  }

  ScorerFactory factory;
  if (args.band_scorer) {
    const BandScorerArgs b = *args.band_scorer;
    const StftConfig stft_cfg = args.config.stft;
    factory = [b, stft_cfg] { return std::make_unique<BandEnergyScorer>(b.f_low_hz, b.f_high_hz, b.ref_energy, stft_cfg); };
  } else {
    const auto argv = args.scorer_cmd;
    factory = [argv] { return open_scorer_session(argv); };
  }
  FaithfulnessOptions opts;
  opts.stft = args.config.stft;
  opts.workers = args.workers;
  opts.tie_tolerance = args.config.faithfulness.tolerance;
  if (args.config.faithfulness.binarize) opts.binarize_quantile = args.config.faithfulness.quantile;

  FaithfulnessReport rep;
  try {
    rep = run_faithfulness(pairs, heatmaps, factory, opts);
  } catch (const ScorerUnavailable& e) {
    log << "error: scorer-unavailable: " << e.what() << "\n";
    return kScorerUnavailable;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  for (const auto& e : errors) {
    FaithfulnessRow row;
    row.id = e.id;
    row.error = e.message;
    rep.per_utterance.push_back(std::move(row));
    ++rep.n_failed;
  }
  std::sort(rep.per_utterance.begin(), rep.per_utterance.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  try {
    const fs::path stem = report_stem(args.out_report);
    if (stem.has_parent_path()) ensure_dir(stem.parent_path());
    detail::write_file_atomic(fs::path(stem.string() + ".csv"), faithfulness_csv(rep));
    detail::write_file_atomic(fs::path(stem.string() + ".json"), faithfulness_json(rep));
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  for (const auto& r : rep.per_utterance) {
    if (!r.error.empty()) log << "entry " << r.id << ": " << r.error << "\n";
  }
  log << "faithfulness over " << rep.n_items << " items: AI " << format_fixed(rep.ai, 2) << ", AD "
      << format_fixed(rep.ad, 2) << ", AG " << format_fixed(rep.ag, 2) << ", Fid-In "
      << format_fixed(rep.fid_in, 2) << (rep.partial() ? " (partial)" : "") << "\n";
  return rep.partial() ? kEntryErrors : kOk;
}

// --- render ------------------------------------------------------------------------

int cmd_render(const RenderArgs& args, std::ostream& log) {
  try {
    const hmap::Payload payload = hmap::read(args.hmap);
    Raster raster;
    if (const auto* mask = std::get_if<BinaryMask>(&payload)) {
      raster = Heatmap::from_mask(*mask).data();
    } else {
      const auto& h = std::get<Heatmap>(payload);
      raster = args.binarize ? Heatmap::from_mask(binarize(h, args.quantile).mask).data() : h.data();
    }
    render_pgm(raster, args.out_pgm);
    return kOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace vocxai::cli
