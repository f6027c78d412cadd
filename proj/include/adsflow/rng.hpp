#pragma once

#include <cstdint>

namespace adsflow {

// splitmix64. Counter-keyed streams keep ensemble draws independent of
// evaluation order, so suite results do not depend on scheduling.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

// Stream for case `index` of an ensemble keyed by `seed`.
inline SplitMix64 case_rng(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ 0x5851f42d4c957f2dULL);
  mix.state += (index + 1) * 0x9e3779b97f4a7c15ULL;
  SplitMix64 out(mix.next());
  return out;
}

}  // namespace adsflow
