#include "wwm/avoidance.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <unordered_set>

#include "closure_view.hpp"
#include "wwm/entropy.hpp"
#include "wwm/errors.hpp"

namespace wwm {

using internal::Orbit;
using internal::orbit_decomposition;
using internal::violation_threshold;

namespace {

void validate_patterns(const ForbiddenSet& f) {
  if (f.m < 1) throw InputError("forbidden set needs m >= 1");
  for (const Word& p : f.patterns) {
    if (p.empty()) throw InputError("empty forbidden pattern");
    for (Letter v : p)
      if (v == 0 || std::abs(v) > f.m) throw InputError("pattern letter out of range");
  }
}

std::vector<long> integral_weights(const WeightVector& w, int m) {
  if (w.m != m) throw InputError("weight vector arity does not match alphabet");
  if (!w.integral()) throw InputError("this operation needs positive integer weights");
  std::vector<long> out;
  out.reserve(w.per_generator.size());
  for (const Rat& q : w.per_generator) {
    if (!q.get_num().fits_slong_p()) throw InputError("integer weight too large");
    out.push_back(q.get_num().get_si());
  }
  return out;
}

bool contains_factor(const Word& big, const Word& small) {
  if (small.size() > big.size()) return false;
  for (std::size_t i = 0; i + small.size() <= big.size(); ++i)
    if (std::equal(small.begin(), small.end(), big.begin() + i)) return true;
  return false;
}

}  // namespace

ForbiddenSet inverse_pair_patterns(int m) {
  if (m < 1) throw InputError("need at least one generator");
  ForbiddenSet f;
  f.m = m;
  for (Letter g = 1; g <= m; ++g) {
    f.patterns.push_back({g, -g});
    f.patterns.push_back({-g, g});
  }
  std::sort(f.patterns.begin(), f.patterns.end());
  f.reduced_set = true;
  return f;
}

ForbiddenSet reduce_patterns(ForbiddenSet f) {
  validate_patterns(f);
  std::sort(f.patterns.begin(), f.patterns.end());
  f.patterns.erase(std::unique(f.patterns.begin(), f.patterns.end()), f.patterns.end());

  // Group by length; a pattern is redundant iff a strictly shorter one is a
  // factor (equal-length containment means equality, already deduplicated).
  std::vector<std::size_t> lengths;
  for (const Word& p : f.patterns) lengths.push_back(p.size());
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());

  std::vector<std::unordered_set<Word, WordHash>> by_len(lengths.size());
  for (const Word& p : f.patterns) {
    auto it = std::lower_bound(lengths.begin(), lengths.end(), p.size());
    by_len[static_cast<std::size_t>(it - lengths.begin())].insert(p);
  }

  std::vector<Word> kept;
  for (const Word& p : f.patterns) {
    bool redundant = false;
    for (std::size_t li = 0; li < lengths.size() && !redundant; ++li) {
      const std::size_t L = lengths[li];
      if (L >= p.size()) break;
      for (std::size_t i = 0; i + L <= p.size() && !redundant; ++i)
        redundant = by_len[li].count(Word(p.begin() + i, p.begin() + i + L)) > 0;
    }
    if (!redundant) kept.push_back(p);
  }
  f.patterns = std::move(kept);
  f.reduced_set = true;
  return f;
}

ForbiddenSet build_forbidden_set(const Presentation& p, const Rat& lambda) {
  if (lambda <= 0 || lambda >= 1) throw InputError("lambda must lie in (0, 1)");
  ForbiddenSet f = inverse_pair_patterns(p.m);
  if (!p.relators.empty()) {
    PrefixFamily fam = threshold_prefixes(p, lambda);
    for (Word& u : fam.prefixes) f.patterns.push_back(std::move(u));
  }
  return reduce_patterns(std::move(f));
}

PrefixFamily threshold_prefixes(const Presentation& p, const Rat& lambda) {
  if (lambda <= 0 || lambda >= 1) throw InputError("lambda must lie in (0, 1)");
  PrefixFamily fam;
  if (p.relators.empty()) return fam;

  std::unordered_set<Word, WordHash> seen;
  auto add = [&](Word u) {
    if (seen.insert(u).second) fam.prefixes.push_back(std::move(u));
  };
  if (p.symmetrized) {
    for (const Word& r : p.relators) {
      std::size_t t = violation_threshold(lambda, r.size());
      add(Word(r.begin(), r.begin() + t));
    }
  } else {
    // Prefixes of closure elements = cyclic threshold-length windows of the
    // base relators and their inverses.
    for (const Orbit& o : orbit_decomposition(p.relators)) {
      std::size_t t = violation_threshold(lambda, o.len());
      for (std::size_t i = 0; i < o.period; ++i) {
        add(Word(o.doubled.begin() + i, o.doubled.begin() + i + t));
        if (!o.inverse_is_rotation)
          add(Word(o.doubled_inv.begin() + i, o.doubled_inv.begin() + i + t));
      }
    }
  }

  std::vector<long> per_letter(2 * p.m, 0);
  fam.min_unweighted_length = 0;
  for (const Word& u : fam.prefixes) {
    ++per_letter[letter_index(u.back())];
    long len = static_cast<long>(u.size());
    if (fam.min_unweighted_length == 0 || len < fam.min_unweighted_length)
      fam.min_unweighted_length = len;
  }
  fam.max_per_letter = *std::max_element(per_letter.begin(), per_letter.end());
  return fam;
}

AvoidanceAutomaton AvoidanceAutomaton::build(const ForbiddenSet& f) {
  validate_patterns(f);
  const int m = f.m;
  const int A = 2 * m;

  // Trie.
  std::vector<std::vector<std::int32_t>> child(1, std::vector<std::int32_t>(A, -1));
  std::vector<bool> terminal(1, false);
  for (const Word& p : f.patterns) {
    std::int32_t u = 0;
    for (Letter v : p) {
      int c = letter_index(v);
      if (child[u][c] < 0) {
        child[u][c] = static_cast<std::int32_t>(child.size());
        child.emplace_back(A, -1);
        terminal.push_back(false);
      }
      u = child[u][c];
    }
    terminal[u] = true;
  }
  const std::size_t n = child.size();

  // Failure links (BFS) + goto closure + dead flags (terminal anywhere on the
  // suffix chain).
  std::vector<std::int32_t> fail(n, 0);
  std::vector<bool> dead(terminal.begin(), terminal.end());
  std::vector<std::vector<std::int32_t>> go(n, std::vector<std::int32_t>(A, 0));
  std::queue<std::int32_t> bfs;
  for (int c = 0; c < A; ++c) {
    if (child[0][c] >= 0) {
      fail[child[0][c]] = 0;
      go[0][c] = child[0][c];
      bfs.push(child[0][c]);
    } else {
      go[0][c] = 0;
    }
  }
  while (!bfs.empty()) {
    std::int32_t u = bfs.front();
    bfs.pop();
    dead[u] = dead[u] || dead[fail[u]];
    for (int c = 0; c < A; ++c) {
      std::int32_t v = child[u][c];
      if (v >= 0) {
        fail[v] = go[fail[u]][c];
        bfs.push(v);
      } else {
        go[u][c] = go[fail[u]][c];
      }
    }
    for (int c = 0; c < A; ++c)
      if (child[u][c] >= 0) go[u][c] = child[u][c];
  }

  // Live reachable states, renumbered densely.
  std::vector<std::int32_t> live_id(n, -1);
  AvoidanceAutomaton out;
  out.m = m;
  if (dead[0]) throw InputError("empty pattern makes every word forbidden");
  std::vector<std::int32_t> order;
  live_id[0] = 0;
  order.push_back(0);
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    std::int32_t u = order[qi];
    for (int c = 0; c < A; ++c) {
      std::int32_t v = go[u][c];
      if (!dead[v] && live_id[v] < 0) {
        live_id[v] = static_cast<std::int32_t>(order.size());
        order.push_back(v);
      }
    }
  }
  out.num_states = order.size();
  out.delta.assign(out.num_states * A, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::int32_t u = order[i];
    for (int c = 0; c < A; ++c) {
      std::int32_t v = go[u][c];
      out.delta[i * A + c] = dead[v] ? -1 : live_id[v];
    }
  }
  return out;
}

GrowthSeries count_avoiding(const ForbiddenSet& f, const WeightVector& w, long n_max,
                            CountMode mode) {
  validate_patterns(f);
  if (n_max < 0) throw InputError("n_max must be >= 0");
  std::vector<long> wl = integral_weights(w, f.m);
  for (long x : wl)
    if (x < 1) throw InputError("weights must be positive integers");

  GrowthSeries out;
  out.exact.assign(n_max + 1, BigInt(0));

  if (mode == CountMode::automaton) {
    AvoidanceAutomaton a = AvoidanceAutomaton::build(f);
    const int A = 2 * f.m;
    const long wmax = *std::max_element(wl.begin(), wl.end());
    const long K = wmax + 1;
    std::vector<std::vector<BigInt>> ring(K, std::vector<BigInt>(a.num_states, BigInt(0)));
    ring[0][0] = 1;
    for (long n = 0; n <= n_max; ++n) {
      std::vector<BigInt>& level = ring[n % K];
      for (std::size_t s = 0; s < a.num_states; ++s) {
        if (level[s] == 0) continue;
        out.exact[n] += level[s];
        for (int c = 0; c < A; ++c) {
          std::int32_t t = a.delta[s * A + c];
          if (t < 0) continue;
          long n2 = n + wl[c / 2];
          if (n2 <= n_max) ring[n2 % K][t] += level[s];
        }
      }
      for (auto& x : level) x = 0;  // slot is reused for level n + K
    }
  } else {
    // Independent enumeration: depth-first over words, testing the new tail
    // against every pattern directly.
    struct Rec {
      const ForbiddenSet& f;
      const std::vector<long>& wl;
      long n_max;
      std::vector<BigInt>& exact;
      Word cur;

      bool tail_hits_pattern() const {
        for (const Word& p : f.patterns) {
          if (p.size() > cur.size()) continue;
          if (std::equal(p.begin(), p.end(), cur.end() - p.size())) return true;
        }
        return false;
      }
      void visit(long weight) {
        exact[weight] += 1;
        for (int c = 0; c < 2 * f.m; ++c) {
          Letter v = index_to_letter(c);
          long w2 = weight + wl[c / 2];
          if (w2 > n_max) continue;
          cur.push_back(v);
          if (!tail_hits_pattern()) visit(w2);
          cur.pop_back();
        }
      }
    } rec{f, wl, n_max, out.exact, {}};
    rec.visit(0);
  }

  out.cumulative.assign(n_max + 1, BigInt(0));
  BigInt acc = 0;
  for (long n = 0; n <= n_max; ++n) {
    acc += out.exact[n];
    out.cumulative[n] = acc;
  }
  return out;
}

double CorrelationPolynomial::eval(double z) const {
  double s = 0;
  for (const auto& [e, c] : coefficients) s += c * std::pow(z, static_cast<double>(e));
  return s;
}

long double CorrelationPolynomial::eval_ld(long double z) const {
  long double s = 0;
  for (const auto& [e, c] : coefficients) s += c * powl(z, static_cast<long double>(e));
  return s;
}

CorrelationPolynomial correlation_polynomial(const Word& first, const Word& second,
                                             const WeightVector& w) {
  std::vector<long> wl = integral_weights(w, w.m);
  CorrelationPolynomial out;
  const std::size_t lim = std::min(first.size(), second.size());
  for (std::size_t L = 1; L <= lim; ++L) {
    if (std::equal(second.begin(), second.begin() + L, first.end() - L)) {
      long e = 0;
      for (std::size_t i = 0; i < L; ++i) e += wl[generator_index(second[i])];
      out.coefficients[e] += 1;
    }
  }
  return out;
}

MyersSolution myers_solve_at(const ForbiddenSet& f, const WeightVector& w, double z) {
  validate_patterns(f);
  std::vector<long> wl = integral_weights(w, f.m);
  const double rate = growth_rate(f, w);
  if (!(z > rate))
    throw InputError("evaluation point must exceed the growth rate (" + std::to_string(rate) + ")");

  const int k = static_cast<int>(f.patterns.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);

  double letters = 0;
  for (int g = 0; g < f.m; ++g) letters += 2.0 * std::pow(z, -static_cast<double>(wl[g]));
  A(0, 0) = 1.0 - letters;
  for (int i = 0; i < k; ++i) A(0, 1 + i) = 1.0;
  b(0) = 1.0;

  for (int j = 0; j < k; ++j) {
    A(1 + j, 0) = 1.0;
    for (int i = 0; i < k; ++i) {
      CorrelationPolynomial corr = correlation_polynomial(f.patterns[i], f.patterns[j], w);
      A(1 + j, 1 + i) -= corr.eval(z);
    }
  }

  Eigen::VectorXd x = A.partialPivLu().solve(b);
  Eigen::VectorXd r = A * x - b;
  double scale = A.lpNorm<Eigen::Infinity>() * x.lpNorm<Eigen::Infinity>() +
                 b.lpNorm<Eigen::Infinity>();
  MyersSolution sol;
  sol.max_residual = r.lpNorm<Eigen::Infinity>() / (scale > 0 ? scale : 1.0);
  if (!x.allFinite() || sol.max_residual > 1e-9)
    throw InputError("first-passage system is singular or ill-conditioned at this point");
  sol.F = x(0);
  sol.per_pattern.assign(x.data() + 1, x.data() + 1 + k);
  return sol;
}

namespace {

// p(z) with the prefix weighted lengths precomputed (grouped by last letter).
long double p_eval_prepared(int m, const std::vector<double>& gen_weights,
                            const std::vector<std::vector<double>>& wlen_by_last,
                            long double z) {
  long double p = 1.0L;
  for (int g = 0; g < m; ++g) {
    long double zw = powl(z, static_cast<long double>(gen_weights[g]));
    p -= 2.0L / (zw + 1.0L);  // both signs of the generator
  }
  for (int idx = 0; idx < 2 * m; ++idx) {
    if (wlen_by_last[idx].empty()) continue;
    long double zw = powl(z, static_cast<long double>(gen_weights[idx / 2]));
    long double tail = 0.0L;
    for (double e : wlen_by_last[idx]) tail += powl(z, -static_cast<long double>(e));
    p += (zw / (zw + 1.0L)) * tail;
  }
  return p;
}

std::vector<std::vector<double>> prefix_wlens(const PrefixFamily& fam, const WeightVector& w) {
  std::vector<std::vector<double>> by_last(2 * w.m);
  for (const Word& u : fam.prefixes) {
    double e = 0;
    for (Letter v : u) e += w.per_generator[generator_index(v)].get_d();
    by_last[letter_index(u.back())].push_back(e);
  }
  return by_last;
}

}  // namespace

long double p_eval(const Presentation& p, const Rat& lambda, const WeightVector& w,
                   long double z) {
  if (w.m != p.m) throw InputError("weight vector arity does not match presentation");
  PrefixFamily fam = threshold_prefixes(p, lambda);
  return p_eval_prepared(p.m, w.as_doubles(), prefix_wlens(fam, w), z);
}

std::optional<double> p_largest_root(const Presentation& p, const Rat& lambda,
                                     const WeightVector& w) {
  if (w.m != p.m) throw InputError("weight vector arity does not match presentation");
  PrefixFamily fam = threshold_prefixes(p, lambda);
  const std::vector<double> gw = w.as_doubles();
  const auto wlens = prefix_wlens(fam, w);
  auto eval = [&](long double z) { return p_eval_prepared(p.m, gw, wlens, z); };

  // Scan a geometric grid up to just above M0 = exp(free entropy); the root
  // can only lie in (1, M0], but the computed M0 carries bisection error, so
  // the top of the scan overshoots by a relative 1e-11.
  const double M0 = std::exp(free_entropy(w));
  const long double lo0 = 1.0L + 1e-9L;
  const long double hi0 = static_cast<long double>(M0) * (1.0L + 1e-11L);
  if (hi0 <= lo0) return std::nullopt;

  constexpr int kGrid = 64;
  long double zs[kGrid], ps[kGrid];
  const long double ratio = powl(hi0 / lo0, 1.0L / (kGrid - 1));
  for (int i = 0; i < kGrid; ++i) {
    zs[i] = (i == kGrid - 1) ? hi0 : lo0 * powl(ratio, i);
    ps[i] = eval(zs[i]);
  }
  int bracket = -1;
  for (int i = 0; i + 1 < kGrid; ++i)
    if (ps[i] < 0.0L && ps[i + 1] >= 0.0L) bracket = i;  // keep the last crossing
  if (bracket < 0) return std::nullopt;

  long double lo = zs[bracket], hi = zs[bracket + 1];
  for (int it = 0; it < 200 && (hi - lo) > 1e-10L; ++it) {
    long double mid = 0.5L * (lo + hi);
    if (eval(mid) < 0.0L)
      lo = mid;
    else
      hi = mid;
  }
  // Return the negative side: a point certified <= the true root, so entropy
  // lower bounds derived from it stay valid.
  return static_cast<double>(lo);
}

namespace {

struct SpectralEstimate {
  double value = 0.0;  // converged estimate of rho(A)
  double upper = 0.0;  // certified upper bound on rho(A) (Collatz-Wielandt)
};

// Power iteration on B = A(z) + I (the +I removes periodicity; rho(B) =
// rho(A) + 1).  The max_i (Bv)_i / v_i quotient upper-bounds rho(B) for any
// positive v, giving an early certificate when the radius is clearly < 1.
SpectralEstimate spectral_radius(const AvoidanceAutomaton& a, const std::vector<double>& pw) {
  const int A = 2 * a.m;
  const std::size_t n = a.num_states;
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), out(n);
  SpectralEstimate est;
  double prev = -1.0;
  int stable = 0;
  for (int it = 0; it < 200000; ++it) {
    double upper = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double acc = v[s];  // the +I term
      const std::int32_t* row = &a.delta[s * A];
      for (int c = 0; c < A; ++c)
        if (row[c] >= 0) acc += pw[c] * v[row[c]];
      out[s] = acc;
      upper = std::max(upper, acc / v[s]);
    }
    est.upper = upper - 1.0;
    // Compensated sum: plain accumulation over n states carries O(n*eps)
    // noise, which can sit above the stability tolerance and stall the stop
    // rule in a floating-point limit cycle.
    double norm = 0.0, comp = 0.0;
    for (double x : out) {
      double y = x - comp, t = norm + y;
      comp = (t - norm) - y;
      norm = t;
    }
    est.value = norm - 1.0;  // ||Bv||_1 with ||v||_1 = 1
    for (std::size_t s = 0; s < n; ++s) v[s] = out[s] / norm;
    if (est.upper < 1.0 - 1e-13) return est;  // certified subcritical
    // The bisection around this only needs ~1e-10; relax slowly as a backstop
    // so a noisy plateau still terminates.
    double tol = 1e-11 * std::max(1.0, prev) * (1.0 + it / 200.0);
    if (prev >= 0 && std::fabs(norm - 1.0 - prev) <= tol) {
      if (++stable >= 3) return est;
    } else {
      stable = 0;
    }
    prev = norm - 1.0;
  }
  return est;
}

}  // namespace

double growth_rate(const ForbiddenSet& f, const WeightVector& w) {
  validate_patterns(f);
  if (w.m != f.m) throw InputError("weight vector arity does not match alphabet");
  for (const Rat& q : w.per_generator)
    if (q <= 0) throw InputError("weights must be positive");

  AvoidanceAutomaton a = AvoidanceAutomaton::build(f);
  const int A = 2 * f.m;
  const std::vector<double> gw = w.as_doubles();
  auto rho = [&](double z) {
    std::vector<double> pw(A);
    for (int c = 0; c < A; ++c) pw[c] = std::pow(z, -gw[c / 2]);
    return spectral_radius(a, pw);
  };

  if (rho(1.0).value <= 1.0 + 1e-9) return 1.0;  // subexponential language

  const double wmin = *std::min_element(gw.begin(), gw.end());
  double hi = std::pow(2.0 * f.m, 1.0 / wmin) + 1.0;  // row sums < 1 up here
  double lo = 1.0;
  for (int guard = 0; rho(hi).value >= 1.0 && guard < 60; ++guard) hi *= 2.0;
  while (hi - lo > 1e-10 * hi) {
    double mid = 0.5 * (lo + hi);
    SpectralEstimate e = rho(mid);
    bool supercritical = e.upper >= 1.0 && e.value >= 1.0;
    if (supercritical)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace wwm
