#ifndef WWM_WEIGHTS_HPP
#define WWM_WEIGHTS_HPP

#include <string>
#include <vector>

#include "wwm/rational.hpp"
#include "wwm/words.hpp"

namespace wwm {

// Weight on the symmetric generating set: w(a_i) = w(a_i^-1) = per_generator[i-1].
// All entries strictly positive rationals.  "Normalized" is the exact condition
// 2 * sum = 1 (each generator contributes twice, once per sign).
struct WeightVector {
  int m = 0;
  std::vector<Rat> per_generator;

  const Rat& of_letter(Letter v) const { return per_generator[generator_index(v)]; }

  bool normalized() const;
  bool integral() const;  // every entry a positive integer

  std::vector<double> as_doubles() const;

  static WeightVector unit(int m);                // all 1
  static WeightVector uniform_normalized(int m);  // all 1/(2m)
  static WeightVector of(int m, std::vector<Rat> per_gen);  // validates
};

// Scales to 2*sum = 1 exactly.
WeightVector normalize(const WeightVector& w);

// Multiplies every entry by a positive integer N' chosen so all entries become
// positive integers (N' = lcm of denominators); returns the scale used.
WeightVector to_integer_scale(const WeightVector& w, BigInt* scale_out);

}  // namespace wwm

#endif
