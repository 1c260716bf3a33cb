#include "wwm/rational.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace wwm {

Rat parse_rat(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty rational");
  try {
    Rat q(s);  // gmp accepts "p/q" and "p"
    // check before canonicalize: mpq_canonicalize divides by the denominator
    if (q.get_den() == 0) throw InputError("rational with zero denominator: " + text);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InputError("malformed rational: " + text);
  }
}

std::string rat_string(const Rat& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

long ceil_rat(const Rat& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  if (!r.fits_slong_p()) throw InputError("rational too large: " + rat_string(q));
  return r.get_si();
}

long floor_rat(const Rat& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  if (!r.fits_slong_p()) throw InputError("rational too large: " + rat_string(q));
  return r.get_si();
}

double rat_double(const Rat& q) { return q.get_d(); }

Rat approx_rat(double x, long max_den, double* abs_err) {
  if (!std::isfinite(x)) throw InputError("cannot approximate a non-finite value");
  // Continued-fraction convergents p_k/q_k until the denominator cap.
  double v = x;
  long p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
  long p = static_cast<long>(std::floor(v)), q = 1;
  double frac = v - std::floor(v);
  Rat best(p, q);
  for (int k = 0; k < 64 && frac > 1e-15; ++k) {
    v = 1.0 / frac;
    double fl = std::floor(v);
    if (fl > static_cast<double>(std::numeric_limits<long>::max() / 4)) break;
    long a = static_cast<long>(fl);
    frac = v - fl;
    long p_next = a * p + p_prev;
    long q_next = a * q + q_prev;
    if (q_next > max_den || q_next <= 0) break;
    p_prev = p; q_prev = q;
    p = p_next; q = q_next;
    best = Rat(p, q);
    best.canonicalize();
  }
  if (abs_err) *abs_err = std::fabs(best.get_d() - x);
  return best;
}

}  // namespace wwm
