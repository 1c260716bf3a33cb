#ifndef WWM_RNG_HPP
#define WWM_RNG_HPP

#include <cstdint>

namespace wwm {

// SplitMix64 (Steele-Lea-Flajolet style mixer).  Chosen because every sampling
// routine here must be bit-reproducible across platforms and thread counts;
// <random> distributions are not pinned by the standard.  All bounded draws go
// through modulo rejection, so results are unbiased and fully determined by
// the stream state.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n >= 1, by rejection on the top multiple of n.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      std::uint64_t v = next();
      if (v < limit) return v % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.  Test/demo helper only; no
  // production sampling path depends on float rounding.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Derives an independent stream for (seed, purpose, ell, trial).  Each
// coordinate is absorbed by one SplitMix64 round, so trial streams can be
// created in any order on any thread and still match a serial run.  Purposes
// keep the experiment's word trials, pair trials and presentation sampling on
// disjoint streams.
enum class StreamPurpose : std::uint64_t {
  word_trial = 1,
  pair_trial = 2,
  presentation = 3,
  generic = 4,
};

inline SplitMix64 stream_for(std::uint64_t seed, StreamPurpose purpose,
                             std::uint64_t ell, std::uint64_t trial) {
  SplitMix64 g{seed};
  g.state ^= g.next() + static_cast<std::uint64_t>(purpose);
  g.state ^= g.next() + ell;
  g.state ^= g.next() + trial;
  g.state ^= g.next();
  return g;
}

}  // namespace wwm

#endif
