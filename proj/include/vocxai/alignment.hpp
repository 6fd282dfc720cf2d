#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vocxai/pair.hpp"

namespace vocxai {

// Global time offset between the members of a parallel pair.
//
// `shift` > 0 means the spoof starts later: spoof[n] ~ bona_fide[n - shift].
// The retained common region is [overlap_start, overlap_start + overlap_len)
// in bona fide sample coordinates, and the same length starting at
// overlap_start + shift in spoof coordinates.
struct AlignmentResult {
  std::int64_t shift = 0;
  std::size_t overlap_start = 0;
  std::size_t overlap_len = 0;
  double cost = 0.0;  // accumulated path cost divided by path length
  std::int64_t path_shift = 0;  // median frame offset along the warping path, in samples
};

struct AlignmentConfig {
  std::size_t frame = 400;  // 25 ms at 16 kHz
  std::size_t hop = 160;    // 10 ms at 16 kHz
  bool enabled = true;
};

// log(sum of squares + 1e-10) per frame; floor((len - frame) / hop) + 1 values.
std::vector<double> frame_log_energy(const Waveform& x, std::size_t frame, std::size_t hop);

// DTW over frame log-energies (symmetric diag/right/down steps, absolute
// difference local cost, ties broken diag > right > down) gives the path cost
// and the median path offset. The reported shift is the rigid offset of the
// two energy contours with the lowest mean absolute difference (overlap at
// least half the shorter contour, ties resolved towards the path offset),
// refined to hop/8 samples on a finer frame grid.
AlignmentResult dtw_align(const ParallelPair& pair, std::size_t frame = 400, std::size_t hop = 160);

// Crops both waveforms to the common region and marks the pair aligned.
// Throws InvalidResult when that region is shorter than `min_len` samples
// (normally one STFT frame).
ParallelPair apply_alignment(const ParallelPair& pair, const AlignmentResult& res,
                             std::size_t min_len = 512);

}  // namespace vocxai
