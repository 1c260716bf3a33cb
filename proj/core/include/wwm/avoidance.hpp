#ifndef WWM_AVOIDANCE_HPP
#define WWM_AVOIDANCE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "wwm/presentation.hpp"
#include "wwm/rational.hpp"
#include "wwm/weights.hpp"
#include "wwm/words.hpp"

namespace wwm {

// Finite set of forbidden factors over the symmetric alphabet.  Words avoiding
// every pattern form the regular language whose weighted growth we count.
struct ForbiddenSet {
  int m = 0;
  std::vector<Word> patterns;  // sorted, deduplicated
  bool reduced_set = false;    // no pattern contains another as a factor
};

// The 2m patterns a_i a_i^-1, a_i^-1 a_i: avoiding exactly these yields the
// freely reduced words.
ForbiddenSet inverse_pair_patterns(int m);

// Inverse pairs plus the length-ceil(lambda*|r|) prefix of every element of
// the symmetrized closure of p, then a reduction pass dropping any pattern
// that contains another as a factor (avoidance language is unchanged).
// Accepts unsymmetrized input; the closure prefixes are the cyclic windows of
// the base relators and their inverses, so the closure itself need not be
// materialized.
ForbiddenSet build_forbidden_set(const Presentation& p, const Rat& lambda);

ForbiddenSet reduce_patterns(ForbiddenSet f);

// Aho-Corasick trie with failure links resolved into a dense transition table
// over live (non-matching) states.  delta[state*2m + letter_index] is the next
// live state or -1 once a pattern has been completed (absorbing).
struct AvoidanceAutomaton {
  int m = 0;
  std::size_t num_states = 0;  // live states, state 0 = root
  std::vector<std::int32_t> delta;

  static AvoidanceAutomaton build(const ForbiddenSet& f);
};

enum class CountMode { automaton, brute_force };

// Exact counts of avoiding words by weighted length: f[n] = #words of weighted
// length exactly n, g[n] = #words of weighted length <= n.  Weights must be
// positive integers.  brute_force mode enumerates words directly (oracle).
struct GrowthSeries {
  std::vector<BigInt> exact;       // f[0..n_max]
  std::vector<BigInt> cumulative;  // g[0..n_max]
};
GrowthSeries count_avoiding(const ForbiddenSet& f, const WeightVector& w, long n_max,
                            CountMode mode = CountMode::automaton);

// Weighted autocorrelation: for each nonempty word v that is simultaneously a
// suffix of first and a prefix of second, one monomial z^{|v|_w}.  With
// positive integer weights distinct overlap lengths give distinct exponents,
// so all coefficients are 1.
struct CorrelationPolynomial {
  std::map<long, long> coefficients;  // exponent -> coefficient
  double eval(double z) const;
  long double eval_ld(long double z) const;
};
CorrelationPolynomial correlation_polynomial(const Word& first, const Word& second,
                                             const WeightVector& w);

// First-passage generating function system at a point z: unknowns are the full
// weighted series F(z) = sum_x z^{-|x|_w} over avoiding words and one series
// per pattern.  Solved by LU with a residual check; z must lie strictly above
// the language's growth rate (validated internally).
struct MyersSolution {
  double F = 0.0;
  std::vector<double> per_pattern;
  double max_residual = 0.0;
};
MyersSolution myers_solve_at(const ForbiddenSet& f, const WeightVector& w, double z);

// ---------------------------------------------------------------------------
// The one-variable certificate polynomial attached to a verified presentation:
//   p(z) = 1 - sum_s (z^{w(s)}+1)^-1
//          + sum_s [z^{w(s)} / (z^{w(s)}+1)] * sum_{u in P_s} z^{-|u|_w}
// where P_s collects the deduplicated threshold prefixes of R* elements ending
// with the letter s.  Any real root bounds the avoidance growth rate from
// below.  Evaluated in long double: the tail monomials underflow double at the
// scales this library targets.
// ---------------------------------------------------------------------------

// Aggregate facts about the threshold-prefix family, reused by the entropy
// sandwich hypotheses.
struct PrefixFamily {
  std::vector<Word> prefixes;             // deduplicated union of the P_s
  long max_per_letter = 0;                // j = max_s |P_s|
  long min_unweighted_length = 0;         // l = min |u|
};
PrefixFamily threshold_prefixes(const Presentation& p, const Rat& lambda);

long double p_eval(const Presentation& p, const Rat& lambda, const WeightVector& w,
                   long double z);

// Largest real root of p on (1, M0] where M0 = exp of the free weighted
// entropy: geometric grid scan for a sign change, then bisection to 1e-10.
// Empty when no sign change is found (p positive throughout).
std::optional<double> p_largest_root(const Presentation& p, const Rat& lambda,
                                     const WeightVector& w);

// Weighted exponential growth rate M of the avoidance language: the unique z
// where the spectral radius of the weighted transfer matrix A(z) crosses 1,
// located by bisection; 1.0 when the language grows subexponentially.
double growth_rate(const ForbiddenSet& f, const WeightVector& w);

}  // namespace wwm

#endif
