#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vocxai/masks.hpp"
#include "vocxai/pair.hpp"
#include "vocxai/scorer.hpp"
#include "vocxai/spectral.hpp"

namespace vocxai {

// Keeps spoof content where h is high and bona fide content where it is low:
//   M = h*Ms + (1-h)*Mb,  P = Pb + h*wrap(Ps - Pb), re-wrapped.
// For h exactly 0 or 1 the bona fide / spoof phase is taken verbatim, which
// is the plain convex rule for binary heatmaps.
Spectrogram mix_spectrograms(const Spectrogram& spoof, const Spectrogram& bona, const Heatmap& h);

// istft(mix_spectrograms(stft(spoof), stft(bona), h)) for an aligned pair.
Waveform masked_audio(const ParallelPair& pair, const Heatmap& h, const StftConfig& cfg);

struct ScoredPair {
  double base_score = 0.0;    // spoof probability of the spoof audio
  double masked_score = 0.0;  // spoof probability of the masked audio
};

struct FaithfulnessRow {
  std::string id;
  double base_score = 0.0;
  double masked_score = 0.0;
  double drop = 0.0;  // max(0, base - masked) / base
  double gain = 0.0;  // max(0, masked - base) / (1 - base)
  bool increased = false;
  bool decision_kept = false;
  bool base_zero_guarded = false;  // base == 0, drop denominator clamped
  std::string error;               // non-empty: item excluded from aggregates
};

struct FaithfulnessReport {
  double ai = 0.0;      // percent of items whose score increased
  double ad = 0.0;      // mean relative drop, percent
  double ag = 0.0;      // mean relative gain, percent
  double fid_in = 0.0;  // fraction of items keeping the decision
  std::vector<FaithfulnessRow> per_utterance;
  std::size_t n_items = 0;  // items aggregated
  std::size_t n_failed = 0;

  bool partial() const { return n_failed > 0; }
};

inline constexpr double kDecisionThreshold = 0.5;

// Scores within `tie_tolerance` of each other count as unchanged (masked is
// taken equal to base). Decisions use score >= 0.5 as "spoof".
FaithfulnessRow score_row(const ScoredPair& s, double tie_tolerance = 0.0);

// AI, AD, AG (percent) and Fid-In over a non-empty list of score pairs.
FaithfulnessReport faithfulness_metrics(std::span<const ScoredPair> scores,
                                        double tie_tolerance = 0.0,
                                        std::span<const std::string> ids = {});

// Aggregates rows that already carry scores or errors.
FaithfulnessReport aggregate_rows(std::vector<FaithfulnessRow> rows);

struct FaithfulnessOptions {
  StftConfig stft;
  std::optional<double> binarize_quantile;  // binarize heatmaps before mixing
  std::size_t workers = 1;
  std::optional<double> tie_tolerance;      // default: the scorer's tolerance
};

// For each pair: base = scorer(spoof), masked = scorer(masked_audio(pair, h)).
// Items whose scoring fails are reported with an error and left out of the
// aggregates. Each worker owns one scorer from `make_scorer`.
FaithfulnessReport run_faithfulness(std::span<const ParallelPair> pairs,
                                    std::span<const Heatmap> heatmaps,
                                    const ScorerFactory& make_scorer,
                                    const FaithfulnessOptions& opts = {});

}  // namespace vocxai
