#pragma once

#include <string>

#include "vocxai/waveform.hpp"

namespace vocxai {

// A bona fide utterance and its vocoded counterpart.
struct ParallelPair {
  Waveform bona_fide;
  Waveform spoof;
  std::string utterance_id;
  std::string vocoder_id;
  bool aligned = false;

  // Throws PreconditionError unless sample rates match and, when aligned,
  // lengths match.
  void check_invariants() const;
};

}  // namespace vocxai
