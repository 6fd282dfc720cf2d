#include "vocxai/alignment.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace vocxai {

namespace {

enum Step : std::uint8_t { kStart, kDiag, kRight, kDown };

bool is_constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// Offset o (spoof index minus bona fide index) in [lo, hi] minimising the mean
// absolute difference over the overlap; overlaps shorter than half the shorter
// sequence are not considered. Ties go to the offset nearest `prior`.
std::int64_t best_rigid_offset(const std::vector<double>& a, const std::vector<double>& b,
                               std::int64_t lo, std::int64_t hi, std::int64_t prior) {
  const auto n = static_cast<std::int64_t>(a.size());
  const auto m = static_cast<std::int64_t>(b.size());
  const std::int64_t min_overlap = std::max<std::int64_t>(1, std::min(n, m) / 2);
  std::int64_t best = prior;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::int64_t o = lo; o <= hi; ++o) {
    const std::int64_t i0 = std::max<std::int64_t>(0, -o);
    const std::int64_t i1 = std::min(n, m - o);
    if (i1 - i0 < min_overlap) continue;
    double sum = 0.0;
    for (std::int64_t i = i0; i < i1; ++i) sum += std::abs(a[i] - b[i + o]);
    const double c = sum / static_cast<double>(i1 - i0);
    if (c < best_cost || (c == best_cost && std::abs(o - prior) < std::abs(best - prior))) {
      best_cost = c;
      best = o;
    }
  }
  return best;
}

}  // namespace

std::vector<double> frame_log_energy(const Waveform& x, std::size_t frame, std::size_t hop) {
  if (hop == 0 || frame < hop) throw InvalidArgument("frame_log_energy: need frame >= hop > 0");
  if (x.size() < frame) {
    throw InvalidInput("frame_log_energy: signal shorter than one frame (" +
                       std::to_string(x.size()) + " < " + std::to_string(frame) + ")");
  }
  const std::size_t count = (x.size() - frame) / hop + 1;
  std::vector<double> out(count);
  for (std::size_t t = 0; t < count; ++t) {
    double e = 0.0;
    const double* p = x.samples.data() + t * hop;
    for (std::size_t i = 0; i < frame; ++i) e += p[i] * p[i];
    out[t] = std::log(e + 1e-10);
  }
  return out;
}

AlignmentResult dtw_align(const ParallelPair& pair, std::size_t frame, std::size_t hop) {
  pair.check_invariants();
  if (pair.bona_fide.size() < frame + hop || pair.spoof.size() < frame + hop) {
    throw InvalidInput("dtw_align: both waveforms must span at least two frames");
  }
  const std::vector<double> a = frame_log_energy(pair.bona_fide, frame, hop);
  const std::vector<double> b = frame_log_energy(pair.spoof, frame, hop);
  if (is_constant(a) && is_constant(b)) {
    throw AlignmentAmbiguous("dtw_align: both energy contours are constant");
  }

  const std::size_t n = a.size();
  const std::size_t m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> steps(n * m, kStart);
  std::vector<double> prev(m, inf);
  std::vector<double> cur(m, inf);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double local = std::abs(a[i] - b[j]);
      if (i == 0 && j == 0) {
        cur[j] = local;
        continue;
      }
      double best = inf;
      Step step = kStart;
      if (i > 0 && j > 0 && prev[j - 1] < best) best = prev[j - 1], step = kDiag;
      if (j > 0 && cur[j - 1] < best) best = cur[j - 1], step = kRight;
      if (i > 0 && prev[j] < best) best = prev[j], step = kDown;
      cur[j] = best + local;
      steps[i * m + j] = step;
    }
    std::swap(prev, cur);
  }
  const double total = prev[m - 1];

  std::vector<std::int64_t> offsets;
  offsets.reserve(n + m);
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  while (true) {
    offsets.push_back(static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i));
    const auto step = steps[i * m + j];
    if (step == kStart) break;
    if (step == kDiag) {
      --i, --j;
    } else if (step == kRight) {
      --j;
    } else {
      --i;
    }
  }
  const std::size_t mid = (offsets.size() - 1) / 2;
  std::nth_element(offsets.begin(), offsets.begin() + static_cast<std::ptrdiff_t>(mid), offsets.end());
  const std::int64_t path_offset = offsets[mid];

  // The warp can absorb a global offset inside any pause, so the path median
  // is only a tie-breaker. The shift itself comes from a rigid offset search
  // on the same contours, refined on a grid hop/8 samples fine.
  const auto ih = static_cast<std::int64_t>(hop);
  const std::int64_t coarse =
      best_rigid_offset(a, b, -(static_cast<std::int64_t>(n) - 1), static_cast<std::int64_t>(m) - 1,
                        path_offset);
  const std::size_t fine_hop = std::max<std::size_t>(1, hop / 8);
  const auto ifh = static_cast<std::int64_t>(fine_hop);
  const std::vector<double> fa = frame_log_energy(pair.bona_fide, frame, fine_hop);
  const std::vector<double> fb = frame_log_energy(pair.spoof, frame, fine_hop);
  const std::int64_t centre = coarse * ih / ifh;
  const std::int64_t reach = (ih + ifh - 1) / ifh;
  const std::int64_t fine = best_rigid_offset(fa, fb, centre - reach, centre + reach, centre);

  AlignmentResult res;
  res.shift = fine * ifh;
  res.path_shift = path_offset * ih;
  res.cost = total / static_cast<double>(offsets.size());
  const auto len_b = static_cast<std::int64_t>(pair.bona_fide.size());
  const auto len_s = static_cast<std::int64_t>(pair.spoof.size());
  if (std::abs(res.shift) >= std::min(len_b, len_s)) {
    throw InvalidResult("dtw_align: recovered shift exceeds the shorter waveform");
  }
  const std::int64_t begin = std::max<std::int64_t>(0, -res.shift);
  const std::int64_t end = std::min(len_b, len_s - res.shift);
  if (end <= begin) throw InvalidResult("dtw_align: no overlap after shifting");
  res.overlap_start = static_cast<std::size_t>(begin);
  res.overlap_len = static_cast<std::size_t>(end - begin);
  return res;
}

ParallelPair apply_alignment(const ParallelPair& pair, const AlignmentResult& res,
                             std::size_t min_len) {
  pair.check_invariants();
  const auto start_b = static_cast<std::int64_t>(res.overlap_start);
  const std::int64_t start_s = start_b + res.shift;
  const auto len = static_cast<std::int64_t>(res.overlap_len);
  if (start_s < 0 || start_b + len > static_cast<std::int64_t>(pair.bona_fide.size()) ||
      start_s + len > static_cast<std::int64_t>(pair.spoof.size())) {
    throw InvalidArgument("apply_alignment: result does not fit this pair");
  }
  if (res.overlap_len < min_len) {
    throw InvalidResult("apply_alignment: overlap of " + std::to_string(res.overlap_len) +
                        " samples is shorter than one frame (" + std::to_string(min_len) + ")");
  }
  ParallelPair out = pair;
  out.bona_fide.samples.assign(pair.bona_fide.samples.begin() + start_b,
                               pair.bona_fide.samples.begin() + start_b + len);
  out.spoof.samples.assign(pair.spoof.samples.begin() + start_s,
                           pair.spoof.samples.begin() + start_s + len);
  out.aligned = true;
  return out;
}

}  // namespace vocxai
