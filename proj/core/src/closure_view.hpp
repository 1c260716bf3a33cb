#ifndef WWM_CLOSURE_VIEW_HPP
#define WWM_CLOSURE_VIEW_HPP

// Internal: lazy traversal of symmetrized closures.  A single relator of
// length ell has a closure of up to 2*ell words; materializing it is O(ell^2)
// memory, which the long-relator paths cannot afford.  Everything here views
// closure elements as slices of doubled arrays instead.

#include <algorithm>
#include <set>
#include <vector>

#include "wwm/errors.hpp"
#include "wwm/rational.hpp"
#include "wwm/words.hpp"

namespace wwm::internal {

// Offset of the lexicographically least rotation (Booth's algorithm).
inline std::size_t least_rotation_offset(const Word& w) {
  const std::size_t n = w.size();
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter sj = w[j % n];
    long i = f[j - k - 1];
    while (i != -1 && sj != w[(k + i + 1) % n]) {
      if (sj < w[(k + i + 1) % n]) k = j - i - 1;
      i = f[i];
    }
    if (sj != w[(k + i + 1) % n]) {
      if (sj < w[(k + i + 1) % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

inline Word least_rotation(const Word& w) { return cyclic_shift(w, least_rotation_offset(w)); }

// Smallest rotation period = number of distinct cyclic shifts.
inline std::size_t rotation_period(const Word& w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = pi[i - 1];
    while (j > 0 && w[i] != w[j]) j = pi[j - 1];
    if (w[i] == w[j]) ++j;
    pi[i] = j;
  }
  std::size_t p = n - pi[n - 1];
  return (n % p == 0) ? p : n;
}

// One rotation+inversion orbit of relators, stored doubled so any cyclic
// shift reads as a contiguous slice.
struct Orbit {
  Word rep;
  Word rep_inv;
  Word doubled;
  Word doubled_inv;
  std::size_t period = 0;
  bool inverse_is_rotation = false;
  std::size_t len() const { return rep.size(); }
  std::size_t element_count() const { return inverse_is_rotation ? period : 2 * period; }
};

// The symmetrized closure is the disjoint union of each orbit's distinct
// rotations (both sides unless the inverse is itself a rotation).
inline std::vector<Orbit> orbit_decomposition(const std::vector<Word>& relators) {
  std::vector<Orbit> orbits;
  std::set<Word> seen;
  for (const Word& r : relators) {
    if (r.empty()) throw InputError("empty relator");
    if (!is_cyclically_reduced(r)) throw InputError("relator is not cyclically reduced");
    Word lr = least_rotation(r);
    Word lri = least_rotation(invert(r));
    Word canon = std::min(lr, lri);
    if (!seen.insert(canon).second) continue;
    Orbit o;
    o.rep = canon;
    o.rep_inv = invert(o.rep);
    o.doubled = concat(o.rep, o.rep);
    o.doubled_inv = concat(o.rep_inv, o.rep_inv);
    o.period = rotation_period(o.rep);
    o.inverse_is_rotation = (lr == lri);
    orbits.push_back(std::move(o));
  }
  std::sort(orbits.begin(), orbits.end(),
            [](const Orbit& a, const Orbit& b) { return a.rep < b.rep; });
  return orbits;
}

// A virtual closure element: a length-len slice of some orbit's doubled array.
struct Slice {
  const Letter* data = nullptr;
  std::size_t len = 0;
  Letter operator[](std::size_t i) const { return data[i]; }
  Word to_word() const { return Word(data, data + len); }
};

inline std::vector<Slice> closure_slices(const std::vector<Orbit>& orbits) {
  std::vector<Slice> out;
  for (const Orbit& o : orbits) {
    for (std::size_t i = 0; i < o.period; ++i) out.push_back({o.doubled.data() + i, o.len()});
    if (!o.inverse_is_rotation)
      for (std::size_t i = 0; i < o.period; ++i)
        out.push_back({o.doubled_inv.data() + i, o.len()});
  }
  return out;
}

// Smallest integer piece length violating |u| < lambda * |r| (exact).
inline std::size_t violation_threshold(const Rat& lambda, std::size_t relator_len) {
  Rat t = lambda * static_cast<long>(relator_len);
  long c = ceil_rat(t);
  return static_cast<std::size_t>(c < 1 ? 1 : c);
}

}  // namespace wwm::internal

#endif
