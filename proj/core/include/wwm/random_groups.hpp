#ifndef WWM_RANDOM_GROUPS_HPP
#define WWM_RANDOM_GROUPS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wwm/presentation.hpp"
#include "wwm/rational.hpp"
#include "wwm/rng.hpp"
#include "wwm/words.hpp"

namespace wwm {

// Uniform freely reduced word of length ell: first letter uniform over 2m,
// each later letter uniform over the 2m-1 non-cancelling choices.
Word sample_reduced_word(int m, long ell, SplitMix64& gen);

// Uniform cyclically reduced word of length ell, by rejection on the
// last-vs-first letter (acceptance (2m-1)/(2m) + O((2m-1)^-ell)).
Word sample_cyclically_reduced_word(int m, long ell, SplitMix64& gen);

// Number of cyclically reduced words of length ell >= 1 over m generators:
// (2m-1)^ell + m + (-1)^ell (m-1), exact.
BigInt cyclically_reduced_count(int m, long ell);

// Density model: floor((2m-1)^(d*ell)) relators, each drawn independently and
// uniformly from the cyclically reduced words of length ell.  Exact big-int
// evaluation of the count (floor of a real q-th root); d in [0,1].
struct DensityModelParams {
  int m = 2;
  long ell = 0;
  Rat density = 0;                       // d
  std::optional<long> relator_count_override;
  std::uint64_t seed = 0;
  std::uint64_t relator_cap = 1'000'000;  // exceeded -> ResourceCapError
};
BigInt density_relator_count(int m, long ell, const Rat& density);
Presentation sample_presentation(const DensityModelParams& params);

// ---------------------------------------------------------------------------
// The letter-transition Markov chain behind the frequency estimates: states
// are the 2m letters, from x one moves uniformly to any y != x^-1.  Symmetric
// and doubly stochastic; its spectrum and conductance control the large-
// deviation constants below.
// ---------------------------------------------------------------------------

struct ChainSpectralReport {
  int m = 0;
  std::vector<double> eigenvalues;   // ascending, all 2m of them
  double beta1 = 0.0;                // second-largest eigenvalue = 1/(2m-1)
  double spectral_gap = 0.0;         // 1 - beta1
  Rat conductance;                   // exact brute-force Cheeger constant
  Rat conductance_lower_bound;       // (m-1)/(2m-1)
  Rat gap_lower_bound;               // conductance^2 / 2
};
ChainSpectralReport chain_spectral(int m);

// Large-deviation constants: C_m = (m-1)^2 / (384 m^2 (2m-1)^2) exactly, and
// the derived window scale d_m = C_m / (16 ln(2m-1)).
struct ModelConstants {
  Rat C_m;
  double d_m = 0.0;
};
ModelConstants model_constants(int m);

// One-sided Chernoff-style tail for letter-frequency deviations over a length-n
// reduced word: 2 e^{1 - gap * delta^2 * n / 12}, with the gap either the
// Cheeger-square lower bound (cheeger_gap = true) or the exact spectral gap.
double frequency_tail_bound(int m, double delta, double n, bool cheeger_gap = true);

// ---------------------------------------------------------------------------
// Genericity experiment: sample cyclically reduced words/pairs at each length,
// check the even-distribution conditions and C'(lambda) over symmetrized
// closures, and report failure rates next to the theoretical union bound.
// ---------------------------------------------------------------------------

struct GenericityRow {
  int m = 0;
  long ell = 0;
  Rat lambda;
  long trials = 0;
  long fail_run = 0;        // condition (i) failures over closure of one word
  long fail_halfwin = 0;    // condition (ii)
  long fail_freqwin = 0;    // condition (iii)
  long fail_smallcanc = 0;  // C'(lambda) failures over closure of a sampled pair
  double rate_pooled = 0.0; // fraction of word trials failing any even-distribution condition
  double bound_pooled = 0.0;       // union bound, Cheeger-square gap constants
  double bound_pooled_exact = 0.0; // variant with the exact spectral gap
};

struct GenericityReport {
  int m = 0;
  Rat lambda;
  long trials = 0;
  std::uint64_t seed = 0;
  std::vector<GenericityRow> rows;
  std::string to_csv() const;  // includes a '#' parameter comment line + pinned header
};

// Deterministic for fixed (m, ells, lambda, trials, seed) regardless of
// threads: every trial draws from its own derived stream.
GenericityReport genericity_experiment(int m, const std::vector<long>& ells, const Rat& lambda,
                                       long trials, std::uint64_t seed, int threads = 1);

// Union bound on the pooled failure probability at one length (exposed for
// tests and for reporting at lengths where it is informative).
double genericity_union_bound(int m, long ell, const Rat& lambda, bool cheeger_gap = true);

}  // namespace wwm

#endif
