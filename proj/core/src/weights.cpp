#include "wwm/weights.hpp"

#include "wwm/errors.hpp"

namespace wwm {

bool WeightVector::normalized() const {
  Rat sum = 0;
  for (const Rat& q : per_generator) sum += q;
  return sum * 2 == 1;
}

bool WeightVector::integral() const {
  for (const Rat& q : per_generator)
    if (q.get_den() != 1) return false;
  return true;
}

std::vector<double> WeightVector::as_doubles() const {
  std::vector<double> out;
  out.reserve(per_generator.size());
  for (const Rat& q : per_generator) out.push_back(q.get_d());
  return out;
}

WeightVector WeightVector::unit(int m) {
  return of(m, std::vector<Rat>(m, Rat(1)));
}

WeightVector WeightVector::uniform_normalized(int m) {
  if (m < 1) throw InputError("need at least one generator");
  return of(m, std::vector<Rat>(m, Rat(1, 2 * m)));
}

WeightVector WeightVector::of(int m, std::vector<Rat> per_gen) {
  if (m < 1) throw InputError("need at least one generator");
  if (static_cast<int>(per_gen.size()) != m)
    throw InputError("weight vector arity does not match m");
  for (Rat& q : per_gen) {
    q.canonicalize();
    if (q <= 0) throw InputError("weights must be strictly positive");
  }
  WeightVector w;
  w.m = m;
  w.per_generator = std::move(per_gen);
  return w;
}

WeightVector normalize(const WeightVector& w) {
  Rat sum = 0;
  for (const Rat& q : w.per_generator) sum += q;
  Rat factor = Rat(1, 2) / sum;
  std::vector<Rat> scaled;
  scaled.reserve(w.per_generator.size());
  for (const Rat& q : w.per_generator) scaled.push_back(q * factor);
  return WeightVector::of(w.m, std::move(scaled));
}

WeightVector to_integer_scale(const WeightVector& w, BigInt* scale_out) {
  BigInt lcm = 1;
  for (const Rat& q : w.per_generator)
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<Rat> scaled;
  scaled.reserve(w.per_generator.size());
  for (const Rat& q : w.per_generator) {
    Rat s = q * Rat(lcm);
    s.canonicalize();
    scaled.push_back(s);
  }
  if (scale_out) *scale_out = lcm;
  return WeightVector::of(w.m, std::move(scaled));
}

}  // namespace wwm
