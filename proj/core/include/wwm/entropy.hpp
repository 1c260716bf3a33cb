#ifndef WWM_ENTROPY_HPP
#define WWM_ENTROPY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wwm/presentation.hpp"
#include "wwm/rational.hpp"
#include "wwm/weights.hpp"
#include "wwm/words.hpp"

namespace wwm {

// ---------------------------------------------------------------------------
// Free weighted entropy: the unique h > 0 with
//   sum_{i=1..m} 1 / (1 + e^{w_i h}) = 1/2,
// found by bisection to absolute tolerance 1e-12.  Scale-covariant:
// h(alpha * w) = h(w) / alpha.
// ---------------------------------------------------------------------------

double free_entropy(const std::vector<double>& per_generator);
double free_entropy(const WeightVector& w);

// dh/dw_i by implicit differentiation of the defining equation.  Entries are
// strictly negative for m >= 2 (and identically zero for m == 1, where the
// entropy vanishes); <grad, w> = -h (Euler relation for homogeneity -1).
std::vector<double> entropy_gradient(const std::vector<double>& per_generator);
std::vector<double> entropy_gradient(const WeightVector& w);

// ---------------------------------------------------------------------------
// Exact ball counting in the Cayley graph of a presented group.  Elements are
// discovered in order of exact weighted distance (ties: lexicographic word),
// with identity of elements decided by Dehn reduction of difference words.
// The search is exact for presentations verified C'(lambda), lambda <= 1/6
// (Dehn's algorithm solves the word problem there); with no relators it counts
// the free group.
// ---------------------------------------------------------------------------

struct BallOptions {
  std::uint64_t node_limit = 50'000'000;  // discovered-word cap; exceeded -> ResourceCapError
};

// Number of group elements within weighted distance <= radius of the identity.
BigInt ball_count(const Presentation& p, const WeightVector& w, const Rat& radius,
                  const BallOptions& opts = {});

// Weighted distances d_w(e, s^n) for n = 1..n_max.  For a verified
// presentation whose relators distribute generators evenly, these grow
// linearly at slope exactly w(s).
std::vector<Rat> power_distances(const Presentation& p, const WeightVector& w, Letter s,
                                 int n_max, const BallOptions& opts = {});

// Exact weighted ball count in a free group for an arbitrary finite symmetric
// step set (steps given as reduced words with positive rational costs).  Used
// for metrics induced by redundant generating sets.
struct WeightedStep {
  Word word;
  Rat cost;
};
BigInt free_ball_count_steps(int m, const std::vector<WeightedStep>& steps, const Rat& radius,
                             const BallOptions& opts = {});

// Same search, but returns every element of the closed ball with its exact
// distance, for comparing the metrics of different step weightings.
std::map<Word, Rat> free_ball_distance_map(int m, const std::vector<WeightedStep>& steps,
                                           const Rat& radius, const BallOptions& opts = {});

// ---------------------------------------------------------------------------
// Two-sided entropy sandwich for a verified presentation:
//   h_lo <= h(G, w) <= h_hi = h(F_m, w).
// h_lo comes from the certificate polynomial's largest real root after exact
// integer rescaling of the weights; hypotheses of the sharp interval
// (minimum prefix length vs. alphabet size, prefix-family cardinality) are
// reported so callers can see whether the a-priori gap bound applies.
// ---------------------------------------------------------------------------

struct SandwichHypotheses {
  long prefix_count_max = 0;        // j
  long prefix_min_length = 0;       // l
  double total_weight = 0.0;        // N = sum over symmetric alphabet of w(s)
  bool min_length_ok = false;       // l > 32m
  bool counting_ok = false;         // 8*m*j*l < (2m-1)^(l/(16m) - 2)
  double apriori_gap = 0.0;         // 2/l, valid when both hold (normalized w)
};

struct EntropyBounds {
  double h_lo = 0.0;
  double h_hi = 0.0;
  SandwichHypotheses hypotheses;
  // Exact rescaling details: integer weights used for the root solve and the
  // scale N' with h = N' * ln(root); rounding error when the input weights
  // were not rational to begin with.
  std::vector<long> integer_weights;
  BigInt scale = 0;
  double weight_rounding_error = 0.0;
};

// Pre: check_translation_apparent(p, lambda) holds (validated; throws
// PreconditionError otherwise).  w must be normalized for the sandwich to
// bound the normalized entropy; arbitrary positive w is rescaled internally
// and bounds are reported on the original scale.
EntropyBounds entropy_bounds(const Presentation& p, const Rat& lambda, const WeightVector& w);

// ---------------------------------------------------------------------------
// Entropy minimization over the simplex of normalized weights
// {w > 0 : 2 * sum w_i = 1}: projected gradient descent with Armijo
// backtracking, entries floored at 1e-6.  The free case has a closed-form
// optimum at the uniform point (by symmetry + strict convexity), which the
// tests pin.
// ---------------------------------------------------------------------------

struct MinimizeOptions {
  double tol = 1e-8;        // stop when projected-gradient norm < tol
  int max_iterations = 20000;
  double floor = 1e-6;
  double initial_step = 1.0;
};

struct MinimizeResult {
  std::vector<double> weights;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// objective: per-generator weights -> entropy-like value.  gradient: optional
// analytic gradient; finite differences (h = 1e-7 central) when absent.
MinimizeResult minimize_entropy(
    const std::function<double(const std::vector<double>&)>& objective, int m,
    const MinimizeOptions& opts = {},
    const std::function<std::vector<double>(const std::vector<double>&)>& gradient = nullptr);

// Convenience: minimize free_entropy itself.
MinimizeResult minimize_free_entropy(int m, const MinimizeOptions& opts = {});

}  // namespace wwm

#endif
