#include "wwm/presentation.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "closure_view.hpp"
#include "wwm/errors.hpp"

namespace wwm {

using internal::Orbit;
using internal::Slice;
using internal::closure_slices;
using internal::orbit_decomposition;
using internal::violation_threshold;

namespace {

// C'(lambda) over a family of slices (used for both the explicit and the lazy
// path; for the explicit path the slices are just the stored relators).
CPrimeReport cprime_over_slices(const std::vector<Slice>& elems, const Rat& lambda) {
  CPrimeReport rep;
  rep.lambda = lambda;
  rep.ok = true;
  const std::size_t n = elems.size();
  std::vector<std::size_t> thresh(n);
  for (std::size_t i = 0; i < n; ++i) thresh[i] = violation_threshold(lambda, elems[i].len);
  for (std::size_t i = 0; i < n && rep.ok; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t cap = std::min({thresh[i], thresh[j], elems[i].len, elems[j].len});
      std::size_t k = 0;
      while (k < cap && elems[i][k] == elems[j][k]) ++k;
      if (k < cap) continue;
      // Threshold reached: extend to the full common prefix for the witness.
      const std::size_t lim = std::min(elems[i].len, elems[j].len);
      while (k < lim && elems[i][k] == elems[j][k]) ++k;
      const std::size_t r_idx = (k >= thresh[i]) ? i : j;
      rep.ok = false;
      CPrimeWitness wit;
      wit.piece = Word(elems[i].data, elems[i].data + k);
      wit.relator = elems[r_idx].to_word();
      rep.witness = std::move(wit);
      break;
    }
  }
  return rep;
}

struct EvenDistThresholds {
  std::size_t run_min_bad;  // smallest run length violating n < lambda * ell
  std::size_t w_half;       // window length for condition (ii)
  std::size_t w_freq;       // window length for condition (iii)
};

EvenDistThresholds thresholds_for(const Rat& lambda, std::size_t ell) {
  EvenDistThresholds t{};
  t.run_min_bad = violation_threshold(lambda, ell);  // n < lambda*ell fails iff n >= ceil
  Rat four = lambda * 4 * static_cast<long>(ell);
  t.w_half = static_cast<std::size_t>(ceil_rat(four));
  t.w_freq = static_cast<std::size_t>(ceil_rat(lambda * static_cast<long>(ell)));
  if (t.w_freq < 1) t.w_freq = 1;
  return t;
}

// Even-distribution conditions over the *cyclic* windows of one word (the
// union over all rotations of their linear windows).  Returns per-condition
// pass flags and fills the earliest witness if a slot is still empty.
std::array<bool, 3> even_dist_cyclic(const Word& r, int m, const Rat& lambda,
                                     std::size_t relator_index,
                                     std::optional<EvenDistWitness>& witness) {
  const std::size_t ell = r.size();
  const EvenDistThresholds t = thresholds_for(lambda, ell);
  std::array<bool, 3> ok{true, true, true};
  const std::vector<long> total = letter_counts(r, m);

  auto note = [&](EvenDistWitness w) {
    w.relator_index = relator_index;
    w.relator = r;
    if (!witness || witness->condition > w.condition) witness = std::move(w);
  };

  // (i) cyclic runs of a single signed letter.
  {
    bool mono = std::all_of(r.begin(), r.end(), [&](Letter v) { return v == r[0]; });
    if (mono) {
      if (ell >= t.run_min_bad) {
        ok[0] = false;
        note({1, 0, {}, 0, r[0], 0, ell, 0});
      }
    } else {
      Word d = concat(r, r);
      std::size_t i = 1;
      // Every maximal cyclic run has a start in [1, ell] at a letter change.
      while (i <= ell && ok[0]) {
        if (d[i] != d[i - 1]) {
          std::size_t j = i;
          while (j + 1 < d.size() && d[j + 1] == d[i]) ++j;
          std::size_t run = j - i + 1;
          if (run >= t.run_min_bad) {
            ok[0] = false;
            note({1, 0, {}, 0, d[i], i % ell, run, 0});
          }
          i = j + 1;
        } else {
          ++i;
        }
      }
    }
  }

  // Sliding pooled letter counts over cyclic windows of length w.
  auto window_scan = [&](std::size_t w, int condition) {
    if (w > ell) return true;  // no window of that length exists
    Word d = concat(r, r);
    std::vector<long> cnt(m, 0);
    for (std::size_t k = 0; k < w; ++k) ++cnt[generator_index(d[k])];
    long violators = 0;
    auto bad = [&](int g) {
      return condition == 2 ? (2 * cnt[g] >= total[g])
                            : (8L * m * cnt[g] <= static_cast<long>(w));
    };
    for (int g = 0; g < m; ++g)
      if (bad(g)) ++violators;
    for (std::size_t pos = 0;; ++pos) {
      if (violators > 0) {
        int g_bad = 0;
        for (int g = 0; g < m; ++g)
          if (bad(g)) { g_bad = g; break; }
        note({condition, 0, {}, g_bad + 1, 0, pos, w, cnt[g_bad]});
        return false;
      }
      if (pos + 1 >= ell) break;
      int g_out = generator_index(d[pos]);
      int g_in = generator_index(d[pos + w]);
      if (g_out != g_in) {
        bool was_out = bad(g_out), was_in = bad(g_in);
        --cnt[g_out];
        ++cnt[g_in];
        violators += (bad(g_out) ? 1 : 0) - (was_out ? 1 : 0);
        violators += (bad(g_in) ? 1 : 0) - (was_in ? 1 : 0);
      }
    }
    return true;
  };

  ok[1] = window_scan(t.w_half, 2);
  ok[2] = window_scan(t.w_freq, 3);
  return ok;
}

// Linear-window variant for one explicit relator (the literal per-element
// semantics; union over a shift-closed family equals the cyclic scan above).
std::array<bool, 3> even_dist_linear(const Word& r, int m, const Rat& lambda,
                                     std::size_t relator_index,
                                     std::optional<EvenDistWitness>& witness) {
  const std::size_t ell = r.size();
  const EvenDistThresholds t = thresholds_for(lambda, ell);
  std::array<bool, 3> ok{true, true, true};
  const std::vector<long> total = letter_counts(r, m);

  auto note = [&](EvenDistWitness w) {
    w.relator_index = relator_index;
    w.relator = r;
    if (!witness || witness->condition > w.condition) witness = std::move(w);
  };

  for (std::size_t i = 0; i < ell && ok[0];) {
    std::size_t j = i;
    while (j + 1 < ell && r[j + 1] == r[i]) ++j;
    std::size_t run = j - i + 1;
    if (run >= t.run_min_bad) {
      ok[0] = false;
      note({1, 0, {}, 0, r[i], i, run, 0});
    }
    i = j + 1;
  }

  auto window_scan = [&](std::size_t w, int condition) {
    if (w > ell) return true;
    std::vector<long> cnt(m, 0);
    for (std::size_t k = 0; k < w; ++k) ++cnt[generator_index(r[k])];
    auto bad = [&](int g) {
      return condition == 2 ? (2 * cnt[g] >= total[g])
                            : (8L * m * cnt[g] <= static_cast<long>(w));
    };
    long violators = 0;
    for (int g = 0; g < m; ++g)
      if (bad(g)) ++violators;
    for (std::size_t pos = 0;; ++pos) {
      if (violators > 0) {
        int g_bad = 0;
        for (int g = 0; g < m; ++g)
          if (bad(g)) { g_bad = g; break; }
        note({condition, 0, {}, g_bad + 1, 0, pos, w, cnt[g_bad]});
        return false;
      }
      if (pos + w >= ell) break;
      int g_out = generator_index(r[pos]);
      int g_in = generator_index(r[pos + w]);
      if (g_out != g_in) {
        bool was_out = bad(g_out), was_in = bad(g_in);
        --cnt[g_out];
        ++cnt[g_in];
        violators += (bad(g_out) ? 1 : 0) - (was_out ? 1 : 0);
        violators += (bad(g_in) ? 1 : 0) - (was_in ? 1 : 0);
      }
    }
    return true;
  };

  ok[1] = window_scan(t.w_half, 2);
  ok[2] = window_scan(t.w_freq, 3);
  return ok;
}

void validate_lambda(const Rat& lambda) {
  if (lambda <= 0 || lambda >= 1) throw InputError("lambda must lie in (0, 1)");
}

}  // namespace

Presentation Presentation::make(int m, std::vector<Word> relators) {
  if (m < 1) throw InputError("need at least one generator");
  for (const Word& r : relators) {
    if (r.empty()) throw InputError("empty relator");
    for (Letter v : r)
      if (v == 0 || std::abs(v) > m) throw InputError("relator letter out of range");
  }
  std::sort(relators.begin(), relators.end());
  relators.erase(std::unique(relators.begin(), relators.end()), relators.end());

  Presentation p;
  p.m = m;
  p.relators = std::move(relators);
  p.all_cyclically_reduced =
      std::all_of(p.relators.begin(), p.relators.end(),
                  [](const Word& r) { return is_cyclically_reduced(r); });
  // A sorted set is symmetrized iff it is closed under one-step shift and
  // inversion (those generate the whole closure).
  p.symmetrized = p.all_cyclically_reduced;
  if (p.symmetrized) {
    auto has = [&](const Word& w) {
      return std::binary_search(p.relators.begin(), p.relators.end(), w);
    };
    for (const Word& r : p.relators) {
      if (!has(cyclic_shift(r, 1)) || !has(invert(r))) {
        p.symmetrized = false;
        break;
      }
    }
  }
  return p;
}

std::size_t Presentation::min_relator_length() const {
  std::size_t best = 0;
  for (const Word& r : relators)
    if (best == 0 || r.size() < best) best = r.size();
  return best;
}

Presentation symmetrized_presentation(const Presentation& p) {
  if (p.symmetrized) return p;
  return Presentation::make(p.m, symmetrize(p.relators));
}

PieceReport max_piece_length(const Presentation& p) {
  if (!p.symmetrized) throw PreconditionError("max_piece_length needs a symmetrized presentation");
  PieceReport rep;
  const auto& rs = p.relators;
  const std::size_t n = rs.size();
  // best[i]: longest common prefix of rs[i] with any other element.
  std::vector<std::size_t> best(n, 0);
  std::size_t arg_i = 0, arg_j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t lim = std::min(rs[i].size(), rs[j].size());
      std::size_t k = 0;
      while (k < lim && rs[i][k] == rs[j][k]) ++k;
      best[i] = std::max(best[i], k);
      best[j] = std::max(best[j], k);
      if (k > rep.max_piece_length) {
        rep.max_piece_length = k;
        arg_i = i;
        arg_j = j;
      }
    }
  }
  // Longest piece contained in r = max over the cyclic shifts of r (all of
  // which are elements) of their best prefix match.
  rep.per_relator_max.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t acc = 0;
    for (std::size_t s = 0; s < rs[i].size(); ++s) {
      Word shifted = cyclic_shift(rs[i], s);
      auto it = std::lower_bound(rs.begin(), rs.end(), shifted);
      acc = std::max(acc, best[static_cast<std::size_t>(it - rs.begin())]);
    }
    rep.per_relator_max[i] = acc;
  }
  if (rep.max_piece_length > 0) {
    rep.witness_piece = Word(rs[arg_i].begin(), rs[arg_i].begin() + rep.max_piece_length);
    rep.witness_first = rs[arg_i];
    rep.witness_second = rs[arg_j];
  }
  return rep;
}

CPrimeReport check_c_prime(const Presentation& p, const Rat& lambda) {
  validate_lambda(lambda);
  if (!p.symmetrized) throw PreconditionError("check_c_prime needs a symmetrized presentation");
  std::vector<Slice> elems;
  elems.reserve(p.relators.size());
  for (const Word& r : p.relators) elems.push_back({r.data(), r.size()});
  return cprime_over_slices(elems, lambda);
}

EvenDistributionReport check_even_distribution(const Presentation& p, const Rat& lambda) {
  validate_lambda(lambda);
  if (!p.symmetrized)
    throw PreconditionError("check_even_distribution needs a symmetrized presentation");
  EvenDistributionReport rep;
  rep.per_relator.reserve(p.relators.size());
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    auto ok = even_dist_linear(p.relators[i], p.m, lambda, i, rep.first_violation);
    rep.per_relator.push_back(ok);
    rep.run_ok = rep.run_ok && ok[0];
    rep.half_window_ok = rep.half_window_ok && ok[1];
    rep.freq_window_ok = rep.freq_window_ok && ok[2];
  }
  return rep;
}

CPrimeReport check_c_prime_closure(const Presentation& p, const Rat& lambda) {
  validate_lambda(lambda);
  if (p.symmetrized) return check_c_prime(p, lambda);
  std::vector<Orbit> orbits = orbit_decomposition(p.relators);
  return cprime_over_slices(closure_slices(orbits), lambda);
}

EvenDistributionReport check_even_distribution_closure(const Presentation& p, const Rat& lambda) {
  validate_lambda(lambda);
  if (p.symmetrized) return check_even_distribution(p, lambda);
  EvenDistributionReport rep;
  std::vector<Orbit> orbits = orbit_decomposition(p.relators);
  rep.per_relator.reserve(orbits.size());
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    auto ok = even_dist_cyclic(orbits[i].rep, p.m, lambda, i, rep.first_violation);
    rep.per_relator.push_back(ok);
    rep.run_ok = rep.run_ok && ok[0];
    rep.half_window_ok = rep.half_window_ok && ok[1];
    rep.freq_window_ok = rep.freq_window_ok && ok[2];
  }
  return rep;
}

TranslationApparentReport check_translation_apparent(const Presentation& p, const Rat& lambda) {
  validate_lambda(lambda);
  TranslationApparentReport rep;
  rep.lambda = lambda;
  rep.cprime.lambda = lambda;
  rep.cprime.ok = true;

  if (!p.all_cyclically_reduced) {
    rep.cyclically_reduced_ok = false;
    rep.failures.push_back("some relator is not cyclically reduced");
    rep.ok = false;
    return rep;
  }
  if (p.relators.empty()) {
    rep.ok = true;  // free group: all conditions hold vacuously
    return rep;
  }

  rep.cprime = check_c_prime_closure(p, lambda);
  rep.even = check_even_distribution_closure(p, lambda);

  if (!rep.cprime.ok) {
    std::ostringstream os;
    os << "small-cancellation C'(" << lambda << ") fails";
    if (rep.cprime.witness)
      os << ": piece of length " << rep.cprime.witness->piece.size() << " in a relator of length "
         << rep.cprime.witness->relator.size();
    rep.failures.push_back(os.str());
  }
  if (!rep.even.run_ok) rep.failures.push_back("even-distribution condition (i) fails: long run");
  if (!rep.even.half_window_ok)
    rep.failures.push_back("even-distribution condition (ii) fails: half-count window");
  if (!rep.even.freq_window_ok)
    rep.failures.push_back("even-distribution condition (iii) fails: low-frequency window");
  rep.ok = rep.cprime.ok && rep.even.ok();
  return rep;
}

std::string EvenDistWitness::describe(int m) const {
  std::ostringstream os;
  os << "condition (" << (condition == 1 ? "i" : condition == 2 ? "ii" : "iii") << ") relator #"
     << relator_index << " [" << word_string(relator, m) << "]";
  if (condition == 1)
    os << " run of " << word_string({run_letter}, m) << "^" << length << " at " << position;
  else
    os << " window at " << position << " length " << length << " generator " << generator
       << " pooled count " << count;
  return os.str();
}

bool is_lambda_reduced(const Word& x, const Presentation& p, const Rat& lambda) {
  validate_lambda(lambda);
  if (!is_reduced(x)) return false;
  if (p.relators.empty()) return true;
  // Forbidden factors: the threshold-length prefix of every closure element,
  // i.e. every cyclic window of that length of each base relator and its
  // inverse.  Collected per distinct length, then factor-scanned.
  std::vector<Orbit> orbits = orbit_decomposition(p.relators);
  std::set<std::size_t> lengths;
  for (const Orbit& o : orbits) lengths.insert(violation_threshold(lambda, o.len()));
  for (std::size_t tlen : lengths) {
    std::unordered_set<Word, WordHash> bad;
    for (const Orbit& o : orbits) {
      if (violation_threshold(lambda, o.len()) != tlen || tlen > o.len()) continue;
      for (std::size_t i = 0; i < o.period; ++i) {
        bad.insert(Word(o.doubled.begin() + i, o.doubled.begin() + i + tlen));
        bad.insert(Word(o.doubled_inv.begin() + i, o.doubled_inv.begin() + i + tlen));
      }
    }
    if (x.size() < tlen) continue;
    for (std::size_t i = 0; i + tlen <= x.size(); ++i) {
      Word f(x.begin() + i, x.begin() + i + tlen);
      if (bad.count(f)) return false;
    }
  }
  return true;
}

Word dehn_reduce(const Word& x, const Presentation& p) {
  Presentation sp = symmetrized_presentation(p);
  Word cur = free_reduce(x);
  if (sp.relators.empty()) return cur;

  // Bucket R* by first letter so the scan only touches plausible relators.
  std::vector<std::vector<const Word*>> by_first(2 * sp.m + 1);
  for (const Word& r : sp.relators) by_first[letter_index(r[0])].push_back(&r);

  for (;;) {
    std::size_t best_pos = cur.size(), best_len = 0;
    const Word* best_rel = nullptr;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (const Word* r : by_first[letter_index(cur[i])]) {
        std::size_t lim = std::min(r->size(), cur.size() - i);
        std::size_t k = 0;
        while (k < lim && cur[i + k] == (*r)[k]) ++k;
        if (2 * k > r->size()) {
          // Leftmost first, then longest, then sorted-relator order (the
          // by_first lists preserve the sorted order).
          if (best_rel == nullptr || k > best_len) {
            best_pos = i;
            best_len = k;
            best_rel = r;
          }
        }
      }
      if (best_rel != nullptr) break;  // leftmost position wins outright
    }
    if (best_rel == nullptr) return cur;
    // cur = A u B with u the matched prefix of r = u v; replace u by v^-1.
    Word v(best_rel->begin() + best_len, best_rel->end());
    Word next(cur.begin(), cur.begin() + best_pos);
    Word vinv = invert(v);
    next.insert(next.end(), vinv.begin(), vinv.end());
    next.insert(next.end(), cur.begin() + best_pos + best_len, cur.end());
    cur = free_reduce(next);
  }
}

Presentation surface_presentation(int genus) {
  if (genus < 2) throw InputError("surface presentation needs genus >= 2");
  Word r;
  for (int i = 0; i < genus; ++i) {
    Letter a = static_cast<Letter>(2 * i + 1);
    Letter b = static_cast<Letter>(2 * i + 2);
    r.push_back(a);
    r.push_back(b);
    r.push_back(-a);
    r.push_back(-b);
  }
  return Presentation::make(2 * genus, {r});
}

GeodesicCertificate surface_geodesic_certificate(const Word& x, int genus) {
  if (genus < 2) throw InputError("surface geodesic certificate needs genus >= 2");
  if (!is_reduced(x)) throw InputError("word must be freely reduced");
  const std::size_t tlen = static_cast<std::size_t>(2 * genus - 2);
  Presentation sp = symmetrized_presentation(surface_presentation(genus));
  std::unordered_set<Word, WordHash> prefixes;
  for (const Word& r : sp.relators)
    prefixes.insert(Word(r.begin(), r.begin() + std::min(tlen, r.size())));
  if (x.size() >= tlen)
    for (std::size_t i = 0; i + tlen <= x.size(); ++i)
      if (prefixes.count(Word(x.begin() + i, x.begin() + i + tlen)))
        return GeodesicCertificate::unknown;
  return GeodesicCertificate::certified_geodesic;
}

}  // namespace wwm
