#include "wwm/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <unordered_map>

#include "wwm/avoidance.hpp"
#include "wwm/errors.hpp"

namespace wwm {

namespace {

void validate_positive(const std::vector<double>& w) {
  if (w.empty()) throw InputError("need at least one generator weight");
  for (double x : w)
    if (!(x > 0) || !std::isfinite(x)) throw InputError("weights must be positive and finite");
}

// 1 / (1 + e^{x}) computed without overflow for large x.
double sigma_neg(double x) {
  double t = std::exp(-x);
  return t / (1.0 + t);
}

// e^{x} / (1 + e^{x})^2, symmetric in x -> -x.
double dsigma(double x) {
  double t = std::exp(-std::fabs(x));
  double d = 1.0 + t;
  return t / (d * d);
}

}  // namespace

double free_entropy(const std::vector<double>& w) {
  validate_positive(w);
  const int m = static_cast<int>(w.size());
  if (m == 1) return 0.0;  // rank one: linear growth

  auto phi = [&](double h) {
    double s = 0;
    for (double wi : w) s += sigma_neg(wi * h);
    return s - 0.5;
  };
  double wmin = *std::min_element(w.begin(), w.end());
  double lo = 0.0, hi = std::log(2.0 * m - 1.0) / wmin + 1.0;
  for (int guard = 0; phi(hi) > 0 && guard < 200; ++guard) hi *= 2.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval hit machine resolution
    if (phi(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double free_entropy(const WeightVector& w) { return free_entropy(w.as_doubles()); }

std::vector<double> entropy_gradient(const std::vector<double>& w) {
  validate_positive(w);
  const int m = static_cast<int>(w.size());
  if (m == 1) return {0.0};
  const double h = free_entropy(w);
  double denom = 0;
  for (double wi : w) denom += wi * dsigma(wi * h);
  std::vector<double> g(m);
  for (int i = 0; i < m; ++i) g[i] = -h * dsigma(w[i] * h) / denom;
  return g;
}

std::vector<double> entropy_gradient(const WeightVector& w) {
  return entropy_gradient(w.as_doubles());
}

// ---------------------------------------------------------------------------
// Ball search.  Reduced words over the symmetric alphabet form a tree under
// append-without-cancellation, so every reduced word is enumerated exactly
// once, at priority (weighted length, lex).  Group elements are identified by
// Dehn-reducing difference words, with a length filter certified by the
// C'(1/6) small-cancellation bound: a nontrivial identity word is strictly
// longer than half the shortest relator.
// ---------------------------------------------------------------------------

namespace {

struct BallNode {
  std::int64_t dist = 0;   // scaled exact distance
  std::uint32_t parent = 0;
  Letter letter = 0;
  std::int32_t len = 0;
};

struct BallSearch {
  int m = 0;
  std::vector<std::int64_t> cost;  // per letter index, scaled
  std::int64_t radius = 0;
  std::uint64_t node_limit = 0;

  // Identity testing (empty for free groups).
  const Presentation* sym = nullptr;
  std::size_t ell_min = 0;

  std::vector<BallNode> nodes;
  std::vector<std::vector<std::uint32_t>> fin_by_len;  // finalized element reps
  std::map<std::int64_t, std::vector<std::uint32_t>> pending;

  Word word_of(std::uint32_t id) const {
    Word w(nodes[id].len);
    for (std::uint32_t cur = id; nodes[cur].len > 0; cur = nodes[cur].parent)
      w[nodes[cur].len - 1] = nodes[cur].letter;
    return w;
  }

  bool same_element(const Word& x, const Word& y) const {
    Word fr = multiply(x, invert(y));
    if (fr.empty()) return true;
    if (sym == nullptr) return false;
    if (2 * fr.size() <= ell_min) return false;  // too short to be a relation
    return dehn_reduce(fr, *sym).empty();
  }

  // Returns true if x duplicates an already-finalized element.
  bool merges(const Word& x) const {
    if (sym == nullptr) return false;
    for (std::size_t L = fin_by_len.size(); L-- > 0;) {
      if (2 * (L + x.size()) <= ell_min) break;  // shorter candidates can't match
      for (std::uint32_t y : fin_by_len[L])
        if (same_element(x, word_of(y))) return true;
    }
    return false;
  }

  // on_element(word, scaled distance) -> false to stop the search.
  template <class F>
  void run(F&& on_element) {
    nodes.push_back({});
    std::size_t max_len = 0;
    {
      std::int64_t cmin = *std::min_element(cost.begin(), cost.end());
      max_len = static_cast<std::size_t>(radius / cmin) + 2;
    }
    fin_by_len.assign(max_len + 1, {});
    pending[0].push_back(0);

    std::vector<std::uint32_t> bucket;
    while (!pending.empty()) {
      auto it = pending.begin();
      const std::int64_t d = it->first;
      bucket = std::move(it->second);
      pending.erase(it);

      // Deterministic processing order: lexicographic within a distance.
      std::vector<Word> words(bucket.size());
      for (std::size_t i = 0; i < bucket.size(); ++i) words[i] = word_of(bucket[i]);
      std::vector<std::uint32_t> idx(bucket.size());
      for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(),
                [&](std::uint32_t a, std::uint32_t b) { return words[a] < words[b]; });

      for (std::uint32_t ii : idx) {
        const std::uint32_t id = bucket[ii];
        const Word& w = words[ii];
        if (merges(w)) continue;
        fin_by_len[w.size()].push_back(id);
        if (!on_element(w, d)) return;

        const Letter last = nodes[id].len > 0 ? nodes[id].letter : 0;
        for (int c = 0; c < 2 * m; ++c) {
          Letter v = index_to_letter(c);
          if (last != 0 && v == -last) continue;
          std::int64_t nd = d + cost[c];
          if (nd > radius) continue;
          if (nodes.size() >= node_limit)
            throw ResourceCapError("ball search exceeded the node limit");
          nodes.push_back({nd, id, v, nodes[id].len + 1});
          pending[nd].push_back(static_cast<std::uint32_t>(nodes.size() - 1));
        }
      }
    }
  }
};

// Common setup: exact integer scaling of weights and radius.
BallSearch make_search(const Presentation& p, const WeightVector& w, const Rat& radius,
                       const BallOptions& opts, Presentation& sym_storage) {
  if (w.m != p.m) throw InputError("weight vector arity does not match presentation");
  if (radius < 0) throw InputError("radius must be nonnegative");

  BallSearch s;
  s.m = p.m;
  s.node_limit = opts.node_limit;

  BigInt den = radius.get_den();
  for (const Rat& q : w.per_generator)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  if (!den.fits_slong_p()) throw InputError("weights too fine for exact ball search");
  Rat scaled_radius = radius * Rat(den);
  scaled_radius.canonicalize();
  s.radius = floor_rat(scaled_radius);
  s.cost.resize(2 * p.m);
  for (int c = 0; c < 2 * p.m; ++c) {
    Rat sc = w.per_generator[c / 2] * Rat(den);
    sc.canonicalize();
    s.cost[c] = floor_rat(sc);
    if (s.cost[c] < 1) throw InputError("weights too fine for exact ball search");
  }

  if (!p.relators.empty()) {
    CPrimeReport c6 = check_c_prime_closure(p, Rat(1, 6));
    if (!c6.ok)
      throw PreconditionError(
          "exact ball counting needs the C'(1/6) small-cancellation condition");
    sym_storage = symmetrized_presentation(p);
    s.sym = &sym_storage;
    s.ell_min = sym_storage.min_relator_length();
  }
  return s;
}

}  // namespace

BigInt ball_count(const Presentation& p, const WeightVector& w, const Rat& radius,
                  const BallOptions& opts) {
  Presentation sym;
  BallSearch s = make_search(p, w, radius, opts, sym);
  BigInt count = 0;
  s.run([&](const Word&, std::int64_t) {
    ++count;
    return true;
  });
  return count;
}

std::vector<Rat> power_distances(const Presentation& p, const WeightVector& w, Letter s,
                                 int n_max, const BallOptions& opts) {
  if (s == 0 || std::abs(s) > p.m) throw InputError("letter out of range");
  if (n_max < 1) throw InputError("n_max must be >= 1");

  Presentation sym;
  Rat radius = w.per_generator[generator_index(s)] * n_max;
  BallSearch search = make_search(p, w, radius, opts, sym);

  std::vector<Word> targets;
  for (int n = 1; n <= n_max; ++n) targets.push_back(Word(n, s));
  std::vector<std::int64_t> found(n_max, -1);
  int remaining = n_max;

  search.run([&](const Word& x, std::int64_t d) {
    for (int n = 0; n < n_max; ++n) {
      if (found[n] >= 0) continue;
      bool hit;
      if (search.sym == nullptr || 2 * (x.size() + targets[n].size()) <= search.ell_min)
        hit = (x == targets[n]);
      else
        hit = search.same_element(x, targets[n]);
      if (hit) {
        found[n] = d;
        --remaining;
      }
    }
    return remaining > 0;
  });

  if (remaining > 0) throw ResourceCapError("power distance search did not close");

  BigInt den = radius.get_den();
  for (const Rat& q : w.per_generator)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<Rat> out;
  out.reserve(n_max);
  for (int n = 0; n < n_max; ++n) {
    Rat d(found[n]);
    d /= Rat(den);
    d.canonicalize();
    out.push_back(d);
  }
  return out;
}

std::map<Word, Rat> free_ball_distance_map(int m, const std::vector<WeightedStep>& steps,
                                           const Rat& radius, const BallOptions& opts) {
  if (m < 1) throw InputError("need at least one generator");
  if (radius < 0) throw InputError("radius must be nonnegative");

  // Close the step set under inversion and keep the cheapest cost per word.
  std::map<Word, Rat> step_cost;
  for (const WeightedStep& st : steps) {
    Word red = free_reduce(st.word);
    if (red.empty()) throw InputError("step words must be nontrivial");
    for (Letter v : red)
      if (std::abs(v) > m) throw InputError("step letter out of range");
    if (st.cost <= 0) throw InputError("step costs must be positive");
    for (const Word& k : {red, invert(red)}) {
      auto it = step_cost.find(k);
      if (it == step_cost.end() || st.cost < it->second) step_cost[k] = st.cost;
    }
  }
  if (step_cost.empty()) throw InputError("empty step set");

  using Entry = std::pair<Rat, Word>;
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> pq(cmp);
  std::unordered_map<Word, Rat, WordHash> best;
  pq.push({Rat(0), Word{}});
  best[Word{}] = 0;

  std::map<Word, Rat> settled;
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    auto bi = best.find(x);
    if (bi == best.end() || d > bi->second) continue;  // stale entry
    if (settled.count(x)) continue;
    settled.emplace(x, d);
    if (settled.size() > opts.node_limit)
      throw ResourceCapError("ball search exceeded the node limit");
    for (const auto& [sw, sc] : step_cost) {
      Rat nd = d + sc;
      if (nd > radius) continue;
      Word nx = multiply(x, sw);
      auto it = best.find(nx);
      if (it == best.end() || nd < it->second) {
        best[nx] = nd;
        pq.push({nd, nx});
      }
    }
  }
  return settled;
}

BigInt free_ball_count_steps(int m, const std::vector<WeightedStep>& steps, const Rat& radius,
                             const BallOptions& opts) {
  return BigInt(free_ball_distance_map(m, steps, radius, opts).size());
}

// ---------------------------------------------------------------------------
// Entropy sandwich.
// ---------------------------------------------------------------------------

EntropyBounds entropy_bounds(const Presentation& p, const Rat& lambda, const WeightVector& w) {
  if (w.m != p.m) throw InputError("weight vector arity does not match presentation");
  TranslationApparentReport ta = check_translation_apparent(p, lambda);
  if (!ta.ok) {
    std::string why = "entropy bounds need a verified presentation";
    for (const std::string& f : ta.failures) why += "; " + f;
    throw PreconditionError(why);
  }

  EntropyBounds out;
  out.h_hi = free_entropy(w);
  out.weight_rounding_error = 0.0;  // weights are exact rationals throughout

  // Exact rescale to integer weights: h(w) = N' * h(N' w).
  WeightVector wi = to_integer_scale(w, &out.scale);
  for (const Rat& q : wi.per_generator) {
    if (!q.get_num().fits_slong_p()) throw InputError("weights too fine for the root solve");
    out.integer_weights.push_back(q.get_num().get_si());
  }
  const double scale = out.scale.get_d();

  if (p.relators.empty()) {
    out.h_lo = out.h_hi;  // free group: the sandwich is exact
  } else {
    std::optional<double> root = p_largest_root(p, lambda, wi);
    out.h_lo = root ? scale * std::log(*root) : 0.0;
    out.h_lo = std::clamp(out.h_lo, 0.0, out.h_hi);

    PrefixFamily fam = threshold_prefixes(p, lambda);
    out.hypotheses.prefix_count_max = fam.max_per_letter;
    out.hypotheses.prefix_min_length = fam.min_unweighted_length;
    double N = 0;
    for (const Rat& q : w.per_generator) N += 2.0 * q.get_d();
    out.hypotheses.total_weight = N;
    const long l = fam.min_unweighted_length, j = fam.max_per_letter, m = p.m;
    out.hypotheses.min_length_ok = l > 32 * m;
    out.hypotheses.counting_ok =
        std::log(8.0 * m * j * l) <
        (static_cast<double>(l) / (16.0 * m) - 2.0) * std::log(2.0 * m - 1.0);
    out.hypotheses.apriori_gap = l > 0 ? 2.0 / static_cast<double>(l) : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projected gradient descent over {w > floor, 2 sum w = 1}.
// ---------------------------------------------------------------------------

namespace {

std::vector<double> project_simplex(const std::vector<double>& v, double floor_, double total) {
  const int m = static_cast<int>(v.size());
  const double mass = total - m * floor_;
  if (mass <= 0) throw InputError("floor too large for the weight simplex");
  std::vector<double> u(m);
  for (int i = 0; i < m; ++i) u[i] = v[i] - floor_;
  std::vector<double> s = u;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0, tau = 0;
  int k = 0;
  for (int i = 0; i < m; ++i) {
    cum += s[i];
    double t = (cum - mass) / (i + 1);
    if (s[i] - t > 0) {
      tau = t;
      k = i + 1;
    }
  }
  (void)k;
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = std::max(u[i] - tau, 0.0) + floor_;
  return out;
}

double norm2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

MinimizeResult minimize_entropy(
    const std::function<double(const std::vector<double>&)>& objective, int m,
    const MinimizeOptions& opts,
    const std::function<std::vector<double>(const std::vector<double>&)>& gradient) {
  if (m < 1) throw InputError("need at least one generator");

  auto grad = [&](const std::vector<double>& w) {
    if (gradient) return gradient(w);
    std::vector<double> g(m);
    const double h = 1e-7;
    for (int i = 0; i < m; ++i) {
      std::vector<double> wp = w, wm = w;
      wp[i] += h;
      wm[i] = std::max(wm[i] - h, opts.floor / 2);
      g[i] = (objective(wp) - objective(wm)) / (wp[i] - wm[i]);
    }
    return g;
  };

  // Deterministic asymmetric start: weights proportional to 1, 2, ..., m.
  std::vector<double> w(m);
  {
    double sum = m * (m + 1) / 2.0;
    for (int i = 0; i < m; ++i) w[i] = 0.5 * (i + 1) / sum;
    w = project_simplex(w, opts.floor, 0.5);
  }

  MinimizeResult res;
  double f = objective(w);
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::vector<double> g = grad(w);
    // Stationarity measure: unit-step projected gradient.
    std::vector<double> probe(m);
    for (int i = 0; i < m; ++i) probe[i] = w[i] - g[i];
    double pg = norm2(w, project_simplex(probe, opts.floor, 0.5));
    if (pg < opts.tol) {
      res.converged = true;
      break;
    }
    double step = opts.initial_step;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> cand(m);
      for (int i = 0; i < m; ++i) cand[i] = w[i] - step * g[i];
      cand = project_simplex(cand, opts.floor, 0.5);
      double move = norm2(w, cand);
      if (move == 0) break;
      double fc = objective(cand);
      if (fc <= f - 1e-4 * move * move / step) {
        w = std::move(cand);
        f = fc;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      res.converged = true;  // no descent direction within machine precision
      break;
    }
  }
  res.weights = w;
  res.value = f;
  res.iterations = it;
  return res;
}

MinimizeResult minimize_free_entropy(int m, const MinimizeOptions& opts) {
  return minimize_entropy([](const std::vector<double>& w) { return free_entropy(w); }, m, opts,
                          [](const std::vector<double>& w) { return entropy_gradient(w); });
}

}  // namespace wwm
