#pragma once

#include <cstdint>
#include <random>

namespace motifbp {

// Seeded stream built on std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Conversions to doubles and bounded integers are done here
// rather than through <random> distributions, which differ between standard
// libraries:
//   uniform01    = (next() >> 11) * 2^-53, in [0, 1)
//   index(n)     = next() / floor(2^64 / n), rejecting draws >= n * floor(2^64 / n)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace motifbp
