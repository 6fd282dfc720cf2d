#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vocxai {

// Seeded generator with platform-independent output. The engine is the
// standard 64-bit Mersenne Twister (fully specified by the standard); the
// conversions to real numbers are done here because the standard library's
// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seed of the named sub-stream `stream` under a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

}  // namespace vocxai
