#ifndef WWM_WORDS_HPP
#define WWM_WORDS_HPP

#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wwm/rational.hpp"

namespace wwm {

// A letter is a nonzero signed integer: +i is the i-th generator, -i its
// inverse (1 <= i <= m).  Words are plain vectors; reducedness is a cheap
// derived predicate, not a stored flag, so words stay value types that hash
// and compare naturally.
using Letter = std::int32_t;
using Word = std::vector<Letter>;

inline Letter inverse(Letter v) { return -v; }
inline int generator_index(Letter v) { return std::abs(v) - 1; }  // 0-based

// Index of a letter in the fixed symmetric alphabet enumeration
// a1, a1^-1, a2, a2^-1, ...; inverse of index_to_letter.
inline int letter_index(Letter v) {
  return 2 * (std::abs(v) - 1) + (v < 0 ? 1 : 0);
}
inline Letter index_to_letter(int idx) {
  Letter gen = static_cast<Letter>(idx / 2 + 1);
  return (idx % 2) ? -gen : gen;
}

bool is_reduced(const Word& w);
bool is_cyclically_reduced(const Word& w);

// Cancels adjacent inverse pairs until none remain (single stack pass).
Word free_reduce(const Word& w);

// Reverses and inverts every letter.
Word invert(const Word& w);

// Conjugates away matching first/last letters of a reduced word until the
// result is cyclically reduced.
Word cyclic_reduce(const Word& w);

Word concat(const Word& a, const Word& b);

// free_reduce(a . b): the only multiplication the library needs.
Word multiply(const Word& a, const Word& b);

Word cyclic_shift(const Word& w, std::size_t offset);

// Sum of weights of the letters (weights indexed by generator, inverse-equal).
// Exact; used for ball radii and avoidance exponents.
Rat weighted_length(const Word& w, const std::vector<Rat>& per_generator);

// Pooled occurrence counts #_{a+-}(w): per generator, occurrences of either
// the generator or its inverse.
std::vector<long> letter_counts(const Word& w, int m);

// Closure of a relator set under cyclic shifts and inversion, deduplicated and
// sorted.  Every input word must be nonempty and cyclically reduced.
std::vector<Word> symmetrize(const std::vector<Word>& relators);

// Words print in chalk-style letter notation when m <= 26: a..z generators,
// A..Z inverses, "1" for the empty word.  Larger alphabets print as
// comma-separated signed integers with "0" for the empty word ("1" must mean
// the first generator there).  parse_word accepts both notations.
std::string word_string(const Word& w, int m);
Word parse_word(const std::string& text, int m);

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (Letter v : w) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace wwm

#endif
