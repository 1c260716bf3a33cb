#include "wwm/random_groups.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "closure_view.hpp"
#include "wwm/errors.hpp"

namespace wwm {

namespace {

void validate_m(int m) {
  if (m < 1) throw InputError("need at least one generator");
}

double log_bigint(const BigInt& n) {
  signed long exp2 = 0;
  double d = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(d) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace

Word sample_reduced_word(int m, long ell, SplitMix64& gen) {
  validate_m(m);
  if (ell < 1) throw InputError("word length must be >= 1");
  Word w;
  w.reserve(ell);
  w.push_back(index_to_letter(static_cast<int>(gen.bounded(2 * m))));
  for (long i = 1; i < ell; ++i) {
    int banned = letter_index(-w.back());
    int c = static_cast<int>(gen.bounded(2 * m - 1));
    if (c >= banned) ++c;
    w.push_back(index_to_letter(c));
  }
  return w;
}

Word sample_cyclically_reduced_word(int m, long ell, SplitMix64& gen) {
  validate_m(m);
  if (ell < 1) throw InputError("word length must be >= 1");
  for (long guard = 0; guard < 1000000; ++guard) {
    Word w = sample_reduced_word(m, ell, gen);
    if (ell == 1 || w.front() != -w.back()) return w;
  }
  throw ResourceCapError("cyclic rejection sampling failed to terminate");
}

BigInt cyclically_reduced_count(int m, long ell) {
  validate_m(m);
  if (ell < 1) throw InputError("word length must be >= 1");
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(2 * m - 1),
                static_cast<unsigned long>(ell));
  BigInt corr = (ell % 2 == 0) ? BigInt(m - 1) : BigInt(-(m - 1));
  return p + m + corr;
}

BigInt density_relator_count(int m, long ell, const Rat& density) {
  validate_m(m);
  if (ell < 1) throw InputError("word length must be >= 1");
  if (density <= 0 || density >= 1) throw InputError("density must lie strictly in (0, 1)");
  const BigInt& num = density.get_num();
  const BigInt& den = density.get_den();
  BigInt exponent = num * ell;
  if (!exponent.fits_ulong_p() || !den.fits_ulong_p())
    throw InputError("density exponent too large");
  BigInt base;
  mpz_ui_pow_ui(base.get_mpz_t(), static_cast<unsigned long>(2 * m - 1),
                exponent.get_ui());
  BigInt count;
  mpz_root(count.get_mpz_t(), base.get_mpz_t(), den.get_ui());
  return count;  // >= 1 since base >= 1
}

Presentation sample_presentation(const DensityModelParams& params) {
  validate_m(params.m);
  BigInt count = params.relator_count_override
                     ? BigInt(*params.relator_count_override)
                     : density_relator_count(params.m, params.ell, params.density);
  if (count < 0) throw InputError("relator count must be nonnegative");
  if (count > BigInt(static_cast<unsigned long>(params.relator_cap)))
    throw ResourceCapError("relator count " + count.get_str() + " exceeds the cap of " +
                           std::to_string(params.relator_cap));
  long n = static_cast<long>(count.get_si());
  std::vector<Word> relators;
  relators.reserve(n);
  for (long i = 0; i < n; ++i) {
    SplitMix64 gen = stream_for(params.seed, StreamPurpose::presentation, params.ell, i);
    relators.push_back(sample_cyclically_reduced_word(params.m, params.ell, gen));
  }
  return Presentation::make(params.m, relators);
}

// ---------------------------------------------------------------------------
// Letter chain.
// ---------------------------------------------------------------------------

ChainSpectralReport chain_spectral(int m) {
  validate_m(m);
  const int n = 2 * m;
  const double off = 1.0 / (2.0 * m - 1.0);

  Eigen::MatrixXd M = Eigen::MatrixXd::Constant(n, n, off);
  for (int g = 0; g < m; ++g) {
    M(2 * g, 2 * g + 1) = 0.0;  // x -> x^-1 forbidden
    M(2 * g + 1, 2 * g) = 0.0;
  }

  ChainSpectralReport rep;
  rep.m = m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  rep.beta1 = rep.eigenvalues[n - 2];
  rep.spectral_gap = 1.0 - rep.beta1;

  rep.conductance_lower_bound = Rat(m - 1, 2 * m - 1);
  if (m <= 12) {
    // Exact Cheeger constant by brute force over subsets S with |S| <= m
    // (stationary distribution is uniform, so the smaller side suffices).
    Rat best(-1);
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
      int size = __builtin_popcountl(mask);
      if (size > m) continue;
      int split = 0;
      for (int g = 0; g < m; ++g) {
        bool a = mask >> (2 * g) & 1, b = mask >> (2 * g + 1) & 1;
        if (a != b) ++split;
      }
      long crossing = static_cast<long>(size) * (n - size) - split;
      Rat phi(crossing, static_cast<long>(size) * (2 * m - 1));
      phi.canonicalize();
      if (best < 0 || phi < best) best = phi;
    }
    rep.conductance = best;
  } else {
    // Minimizer is S = {one letter from each pair}; verified exhaustively
    // for every m <= 12.
    rep.conductance = rep.conductance_lower_bound;
  }
  rep.gap_lower_bound = rep.conductance * rep.conductance / 2;
  rep.gap_lower_bound.canonicalize();
  return rep;
}

ModelConstants model_constants(int m) {
  if (m < 2) throw InputError("model constants need at least two generators");
  ModelConstants c;
  c.C_m = Rat(static_cast<long>(m - 1) * (m - 1),
              384L * m * m * (2 * m - 1) * (2 * m - 1));
  c.C_m.canonicalize();
  c.d_m = c.C_m.get_d() / (16.0 * std::log(2.0 * m - 1.0));
  return c;
}

double frequency_tail_bound(int m, double delta, double n, bool cheeger_gap) {
  if (m < 2) throw InputError("tail bound needs at least two generators");
  if (!(delta > 0) || !(n > 0)) throw InputError("delta and n must be positive");
  double gap;
  if (cheeger_gap) {
    double num = static_cast<double>(m - 1) * (m - 1);
    gap = num / (2.0 * (2 * m - 1) * (2 * m - 1));  // Cheeger-square lower bound
  } else {
    gap = (2.0 * m - 2.0) / (2.0 * m - 1.0);  // exact spectral gap
  }
  return 2.0 * std::exp(1.0 - gap * delta * delta * n / 12.0);
}

// ---------------------------------------------------------------------------
// Genericity experiment.
// ---------------------------------------------------------------------------

double genericity_union_bound(int m, long ell, const Rat& lambda, bool cheeger_gap) {
  if (m < 2) throw InputError("union bound needs at least two generators");
  if (ell < 1) throw InputError("word length must be >= 1");
  if (lambda <= 0 || lambda >= 1) throw InputError("lambda must lie strictly in (0, 1)");

  const double L1 =
      static_cast<double>(internal::violation_threshold(lambda, static_cast<std::size_t>(ell)));
  Rat l2 = lambda * 4 * ell;
  l2.canonicalize();
  const double L2 = static_cast<double>(ceil_rat(l2));

  // Per-letter frequency deviation delta = 1/(4m) in the tail bound gives the
  // rate constant C = gap * delta^2 / 12; with the Cheeger-square gap this is
  // exactly C_m from model_constants.
  const double delta = 1.0 / (4.0 * m);
  double gap;
  if (cheeger_gap) {
    double num = static_cast<double>(m - 1) * (m - 1);
    gap = num / (2.0 * (2 * m - 1) * (2 * m - 1));
  } else {
    gap = (2.0 * m - 2.0) / (2.0 * m - 1.0);
  }
  const double C = gap * delta * delta / 12.0;

  const double twom = 2.0 * m;
  const double lnb = std::log(2.0 * m - 1.0);
  const double B_run = twom * ell * std::exp(-L1 * lnb);
  const double B_half = twom * ell * (std::exp(1.0 - C * L2) + std::exp(1.0 - C * ell));
  const double B_freq = twom * ell * std::exp(1.0 - C * L1);

  // Reduced-to-cyclically-reduced change of measure: the tail bounds hold for
  // the uniform reduced word, and the cyclically reduced sample is a uniform
  // restriction of it.
  double correction = std::exp(std::log(twom) + (ell - 1) * lnb -
                               log_bigint(cyclically_reduced_count(m, ell)));
  return correction * (B_run + B_half + B_freq);
}

std::string GenericityReport::to_csv() const {
  std::ostringstream os;
  os << "# m=" << m << " lambda=" << rat_string(lambda) << " trials=" << trials
     << " seed=" << seed << "\n";
  os << "m,ell,lambda,trials,fail_run,fail_halfwin,fail_freqwin,fail_smallcanc,"
        "rate_pooled,bound_pooled\n";
  os.precision(10);
  for (const GenericityRow& r : rows) {
    os << r.m << ',' << r.ell << ',' << rat_string(r.lambda) << ',' << r.trials << ','
       << r.fail_run << ',' << r.fail_halfwin << ',' << r.fail_freqwin << ','
       << r.fail_smallcanc << ',' << r.rate_pooled << ',' << r.bound_pooled << "\n";
  }
  return os.str();
}

GenericityReport genericity_experiment(int m, const std::vector<long>& ells, const Rat& lambda,
                                       long trials, std::uint64_t seed, int threads) {
  if (m < 2) throw InputError("genericity experiment needs at least two generators");
  if (trials < 1) throw InputError("need at least one trial");
  if (lambda <= 0 || lambda >= 1) throw InputError("lambda must lie strictly in (0, 1)");
  if (threads < 1) threads = 1;

  GenericityReport rep;
  rep.m = m;
  rep.lambda = lambda;
  rep.trials = trials;
  rep.seed = seed;

  for (long ell : ells) {
    if (ell < 1) throw InputError("word length must be >= 1");
    struct Tally {
      long run = 0, half = 0, freq = 0, smallcanc = 0, pooled = 0;
    };
    std::vector<Tally> partial(threads);

    auto work = [&](int tid) {
      Tally& t = partial[tid];
      for (long trial = tid; trial < trials; trial += threads) {
        {
          SplitMix64 gen = stream_for(seed, StreamPurpose::word_trial, ell, trial);
          Word w = sample_cyclically_reduced_word(m, ell, gen);
          Presentation p = Presentation::make(m, {w});
          EvenDistributionReport ed = check_even_distribution_closure(p, lambda);
          bool bad = false;
          if (!ed.run_ok) ++t.run, bad = true;
          if (!ed.half_window_ok) ++t.half, bad = true;
          if (!ed.freq_window_ok) ++t.freq, bad = true;
          if (bad) ++t.pooled;
        }
        {
          SplitMix64 gen = stream_for(seed, StreamPurpose::pair_trial, ell, trial);
          Word w1 = sample_cyclically_reduced_word(m, ell, gen);
          Word w2 = sample_cyclically_reduced_word(m, ell, gen);
          Presentation p = Presentation::make(m, {w1, w2});
          if (!check_c_prime_closure(p, lambda).ok) ++t.smallcanc;
        }
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int tid = 0; tid < threads; ++tid) pool.emplace_back(work, tid);
      for (std::thread& th : pool) th.join();
    }

    GenericityRow row;
    row.m = m;
    row.ell = ell;
    row.lambda = lambda;
    row.trials = trials;
    for (const Tally& t : partial) {
      row.fail_run += t.run;
      row.fail_halfwin += t.half;
      row.fail_freqwin += t.freq;
      row.fail_smallcanc += t.smallcanc;
      row.rate_pooled += static_cast<double>(t.pooled);
    }
    row.rate_pooled /= static_cast<double>(trials);
    row.bound_pooled = genericity_union_bound(m, ell, lambda, true);
    row.bound_pooled_exact = genericity_union_bound(m, ell, lambda, false);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace wwm
