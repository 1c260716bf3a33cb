#ifndef WWM_RATIONAL_HPP
#define WWM_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "wwm/errors.hpp"

namespace wwm {

// Exact arithmetic throughout the library: comparisons against thresholds like
// lambda*|r| must never go through floating point.
using Rat = mpq_class;
using BigInt = mpz_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw InputError("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q" or "p" (optionally signed).  Used by the CLI for --lambda,
// --radius and weight files.
Rat parse_rat(const std::string& text);

std::string rat_string(const Rat& q);

// ceil(q) for q >= 0, as a machine integer (throws if it does not fit).
long ceil_rat(const Rat& q);

// floor(q), same contract.
long floor_rat(const Rat& q);

double rat_double(const Rat& q);

// Best rational approximation to x with denominator <= max_den, via continued
// fractions.  Used to rescale possibly-irrational weight vectors before exact
// integer-weight machinery.  |x - result| is also reported.
Rat approx_rat(double x, long max_den, double* abs_err = nullptr);

}  // namespace wwm

#endif
