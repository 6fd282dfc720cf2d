#include "vocxai/faithfulness.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vocxai/annotation.hpp"

namespace vocxai {

namespace {
constexpr double kBaseGuard = 1e-8;
}

Spectrogram mix_spectrograms(const Spectrogram& spoof, const Spectrogram& bona, const Heatmap& h) {
  require_same_shape(spoof.magnitude, bona.magnitude, "mix_spectrograms");
  require_same_shape(spoof.magnitude, h.data(), "mix_spectrograms");
  require_same_shape(spoof.magnitude, spoof.phase, "mix_spectrograms");
  require_same_shape(bona.magnitude, bona.phase, "mix_spectrograms");
  if (!(spoof.config == bona.config) || spoof.sample_rate != bona.sample_rate) {
    throw InvalidArgument("mix_spectrograms: spectrogram configurations differ");
  }
  Spectrogram out = bona;
  auto hs = h.data().values();
  auto ms = spoof.magnitude.values();
  auto mb = bona.magnitude.values();
  auto ps = spoof.phase.values();
  auto pb = bona.phase.values();
  auto mo = out.magnitude.values();
  auto po = out.phase.values();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double w = hs[i];
    if (w == 1.0) {
      mo[i] = ms[i];
      po[i] = ps[i];
    } else if (w == 0.0) {
      mo[i] = mb[i];
      po[i] = pb[i];
    } else {
      mo[i] = w * ms[i] + (1.0 - w) * mb[i];
      po[i] = wrap_phase(pb[i] + w * wrap_phase(ps[i] - pb[i]));
    }
  }
  return out;
}

Waveform masked_audio(const ParallelPair& pair, const Heatmap& h, const StftConfig& cfg) {
  if (!pair.aligned) throw PreconditionError("masked_audio: pair is not aligned");
  pair.check_invariants();
  return istft(mix_spectrograms(stft(pair.spoof, cfg), stft(pair.bona_fide, cfg), h));
}

FaithfulnessRow score_row(const ScoredPair& s, double tie_tolerance) {
  if (!(s.base_score >= 0.0 && s.base_score <= 1.0 && s.masked_score >= 0.0 &&
        s.masked_score <= 1.0)) {
    throw InvalidArgument("scores must lie in [0, 1]");
  }
  FaithfulnessRow row;
  row.base_score = s.base_score;
  row.masked_score = s.masked_score;
  const double base = s.base_score;
  const double masked =
      std::abs(s.masked_score - base) <= tie_tolerance ? base : s.masked_score;
  row.base_zero_guarded = base == 0.0;
  row.drop = std::max(0.0, base - masked) / std::max(base, kBaseGuard);
  row.gain = base >= 1.0 ? 0.0 : std::max(0.0, masked - base) / (1.0 - base);
  row.increased = masked > base;
  row.decision_kept = (masked >= kDecisionThreshold) == (base >= kDecisionThreshold);
  return row;
}

FaithfulnessReport aggregate_rows(std::vector<FaithfulnessRow> rows) {
  FaithfulnessReport rep;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++rep.n_failed;
      continue;
    }
    ++rep.n_items;
    rep.ad += r.drop;
    rep.ag += r.gain;
    rep.ai += r.increased ? 1.0 : 0.0;
    rep.fid_in += r.decision_kept ? 1.0 : 0.0;
  }
  if (rep.n_items > 0) {
    const double n = static_cast<double>(rep.n_items);
    rep.ad = 100.0 * rep.ad / n;
    rep.ag = 100.0 * rep.ag / n;
    rep.ai = 100.0 * rep.ai / n;
    rep.fid_in /= n;
  }
  rep.per_utterance = std::move(rows);
  return rep;
}

FaithfulnessReport faithfulness_metrics(std::span<const ScoredPair> scores, double tie_tolerance,
                                        std::span<const std::string> ids) {
  if (scores.empty()) throw InvalidArgument("faithfulness_metrics: empty score list");
  if (!ids.empty() && ids.size() != scores.size()) {
    throw InvalidArgument("faithfulness_metrics: id list length differs");
  }
  std::vector<FaithfulnessRow> rows;
  rows.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    rows.push_back(score_row(scores[i], tie_tolerance));
    rows.back().id = ids.empty() ? std::to_string(i) : ids[i];
  }
  return aggregate_rows(std::move(rows));
}

FaithfulnessReport run_faithfulness(std::span<const ParallelPair> pairs,
                                    std::span<const Heatmap> heatmaps,
                                    const ScorerFactory& make_scorer,
                                    const FaithfulnessOptions& opts) {
  if (pairs.empty()) throw InvalidArgument("run_faithfulness: no pairs");
  if (pairs.size() != heatmaps.size()) {
    throw InvalidArgument("run_faithfulness: pairs and heatmaps differ in count");
  }
  opts.stft.validate();
  const std::size_t workers = std::clamp<std::size_t>(opts.workers, 1, pairs.size());

  // Sessions are opened up front so an unavailable scorer fails the run
  // before any item is processed.
  std::vector<std::unique_ptr<Scorer>> scorers;
  for (std::size_t w = 0; w < workers; ++w) scorers.push_back(make_scorer());
  const double tol = opts.tie_tolerance.value_or(scorers.front()->tolerance());

  std::vector<FaithfulnessRow> rows(pairs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&](Scorer& scorer) {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      const ParallelPair& pair = pairs[i];
      FaithfulnessRow& row = rows[i];
      row.id = pair.utterance_id.empty() ? std::to_string(i) : pair.utterance_id;
      try {
        const Heatmap h = opts.binarize_quantile
                              ? Heatmap::from_mask(binarize(heatmaps[i], *opts.binarize_quantile).mask)
                              : heatmaps[i];
        const ScoreOutcome base = scorer.score(pair.spoof, row.id + "/base");
        if (!base.ok()) {
          row.error = "base scoring failed: " + base.error;
          continue;
        }
        const ScoreOutcome masked = scorer.score(masked_audio(pair, h, opts.stft), row.id + "/masked");
        if (!masked.ok()) {
          row.error = "masked scoring failed: " + masked.error;
          continue;
        }
        const std::string id = row.id;
        row = score_row({*base.score, *masked.score}, tol);
        row.id = id;
      } catch (const ScorerUnavailable&) {
        throw;
      } catch (const Error& e) {
        row.error = e.what();
      }
    }
  };

  if (workers == 1) {
    work(*scorers.front());
  } else {
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          work(*scorers[w]);
        } catch (...) {
          failures[w] = std::current_exception();
          next = pairs.size();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  return aggregate_rows(std::move(rows));
}

}  // namespace vocxai
