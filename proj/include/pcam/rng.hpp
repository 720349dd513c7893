#pragma once

#include <cstdint>

namespace pcam {

// Counter-based generator built from the SplitMix64 finalizer. A draw is a
// pure function of (stream key, counter), so trials and thread counts cannot
// change the sampled numbers: draw k of stream s is always the same word.

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct CounterRng {
  std::uint64_t key = 0;

  /// Sub-stream `idx` of master seed `seed` (two mixing rounds decorrelate).
  static CounterRng stream(std::uint64_t seed, std::uint64_t idx) {
    return CounterRng{splitmix64(splitmix64(seed) ^ (idx * 0xD1342543DE82EF95ULL))};
  }

  std::uint64_t draw(std::uint64_t counter) const {
    return splitmix64(key ^ ((counter + 1) * 0x9E3779B97F4A7C15ULL));
  }

  /// Uniform double in [0,1) from draw `counter`.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(draw(counter) >> 11) * 0x1.0p-53;
  }
};

}  // namespace pcam
