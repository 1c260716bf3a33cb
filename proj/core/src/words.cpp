#include "wwm/words.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "wwm/errors.hpp"

namespace wwm {

bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == -w[i - 1]) return false;
  return true;
}

bool is_cyclically_reduced(const Word& w) {
  if (!is_reduced(w)) return false;
  return w.size() < 2 || w.front() != -w.back();
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter v : w) {
    if (v == 0) throw InputError("letter 0 is not a generator");
    if (!out.empty() && out.back() == -v)
      out.pop_back();
    else
      out.push_back(v);
  }
  return out;
}

Word invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& v : out) v = -v;
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + lo, r.begin() + hi);
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word multiply(const Word& a, const Word& b) { return free_reduce(concat(a, b)); }

Word cyclic_shift(const Word& w, std::size_t offset) {
  if (w.empty()) return w;
  offset %= w.size();
  Word out(w.begin() + offset, w.end());
  out.insert(out.end(), w.begin(), w.begin() + offset);
  return out;
}

Rat weighted_length(const Word& w, const std::vector<Rat>& per_generator) {
  Rat total = 0;
  for (Letter v : w) {
    int idx = generator_index(v);
    if (idx < 0 || idx >= static_cast<int>(per_generator.size()))
      throw InputError("letter out of range for weight vector");
    total += per_generator[idx];
  }
  return total;
}

std::vector<long> letter_counts(const Word& w, int m) {
  std::vector<long> counts(m, 0);
  for (Letter v : w) {
    int idx = generator_index(v);
    if (idx < 0 || idx >= m) throw InputError("letter out of range in letter_counts");
    ++counts[idx];
  }
  return counts;
}

std::vector<Word> symmetrize(const std::vector<Word>& relators) {
  std::set<Word> closure;
  for (const Word& r : relators) {
    if (r.empty()) throw InputError("empty relator cannot be symmetrized");
    if (!is_cyclically_reduced(r))
      throw InputError("relator is not cyclically reduced: cannot symmetrize");
    const Word inv = invert(r);
    for (std::size_t s = 0; s < r.size(); ++s) {
      closure.insert(cyclic_shift(r, s));
      closure.insert(cyclic_shift(inv, s));
    }
  }
  return std::vector<Word>(closure.begin(), closure.end());
}

std::string word_string(const Word& w, int m) {
  // Identity: "1" in chalk notation; "0" in numeric notation, where the bare
  // token "1" must mean the first generator.
  if (w.empty()) return m <= 26 ? "1" : "0";
  std::ostringstream os;
  if (m <= 26) {
    for (Letter v : w) {
      int idx = generator_index(v);
      if (idx >= 26) throw InputError("letter notation needs m <= 26");
      os << static_cast<char>((v > 0 ? 'a' : 'A') + idx);
    }
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) os << ',';
      os << w[i];
    }
  }
  return os.str();
}

Word parse_word(const std::string& text, int m) {
  Word out;
  const bool numeric = text.find_first_of("0123456789-") != std::string::npos &&
                       text.find_first_of("abcdefghijklmnopqrstuvwxyz"
                                          "ABCDEFGHIJKLMNOPQRSTUVWXYZ") == std::string::npos;
  if (text == "0") return out;                // identity, numeric notation
  if (text == "1" && m <= 26) return out;     // identity, chalk notation
  if (numeric) {
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.find_first_not_of(" \t") == std::string::npos) continue;
      long v = 0;
      try {
        v = std::stol(tok);
      } catch (...) {
        throw InputError("bad numeric letter: " + tok);
      }
      if (v == 0 || std::labs(v) > m) throw InputError("letter out of range: " + tok);
      out.push_back(static_cast<Letter>(v));
    }
  } else {
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      Letter v;
      if (c >= 'a' && c <= 'z')
        v = static_cast<Letter>(c - 'a' + 1);
      else if (c >= 'A' && c <= 'Z')
        v = static_cast<Letter>(-(c - 'A' + 1));
      else
        throw InputError(std::string("bad letter character: ") + c);
      if (std::abs(v) > m) throw InputError(std::string("letter out of range: ") + c);
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace wwm
