#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "test_util.hpp"
#include "wwm/entropy.hpp"
#include "wwm/random_groups.hpp"

using namespace wwm;
using testutil::random_normalized_weights;
using testutil::random_rat_weights;

TEST_CASE("uniform normalized weights have the closed-form entropy") {
  for (int m : {1, 2, 3, 5}) {
    double expect = 2.0 * m * std::log(2.0 * m - 1.0);
    CHECK(free_entropy(WeightVector::uniform_normalized(m)) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(free_entropy(WeightVector::unit(1)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("entropy input validation") {
  CHECK_THROWS_AS(free_entropy(std::vector<double>{}), InputError);
  CHECK_THROWS_AS(free_entropy(std::vector<double>{1.0, -2.0}), InputError);
  CHECK_THROWS_AS(free_entropy(std::vector<double>{0.0}), InputError);
}

TEST_CASE("entropy is scale-covariant of degree -1") {
  SplitMix64 g{41};
  for (int i = 0; i < 100; ++i) {
    int m = 1 + static_cast<int>(g.bounded(5));
    WeightVector w = random_rat_weights(m, g);
    double h = free_entropy(w);
    for (long alpha : {2L, 10L}) {
      std::vector<Rat> scaled = w.per_generator;
      for (Rat& q : scaled) q *= alpha;
      CHECK(free_entropy(WeightVector::of(m, scaled)) ==
            doctest::Approx(h / static_cast<double>(alpha)).epsilon(1e-9));
    }
    std::vector<Rat> halved = w.per_generator;
    for (Rat& q : halved) q /= 2;
    CHECK(free_entropy(WeightVector::of(m, halved)) == doctest::Approx(2 * h).epsilon(1e-9));
  }
}

TEST_CASE("entropy is pointwise antitone in the weights") {
  SplitMix64 g{42};
  for (int i = 0; i < 100; ++i) {
    int m = 1 + static_cast<int>(g.bounded(4));
    WeightVector w = random_rat_weights(m, g);
    std::vector<Rat> bumped = w.per_generator;
    for (Rat& q : bumped)
      if (g.bounded(2)) q += Rat(1 + static_cast<long>(g.bounded(5)), 7);
    CHECK(free_entropy(WeightVector::of(m, bumped)) <= free_entropy(w) + 1e-12);
  }
}

TEST_CASE("entropy is strictly convex along segments of normalized weights") {
  SplitMix64 g{43};
  for (int i = 0; i < 100; ++i) {
    int m = 2 + static_cast<int>(g.bounded(3));
    WeightVector w0 = random_normalized_weights(m, g);
    WeightVector w1 = random_normalized_weights(m, g);
    if (w0.per_generator == w1.per_generator) continue;
    double h0 = free_entropy(w0), h1 = free_entropy(w1);
    for (const Rat& t : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
      std::vector<Rat> mix(w0.per_generator.size());
      for (std::size_t k = 0; k < mix.size(); ++k) {
        mix[k] = (Rat(1) - t) * w0.per_generator[k] + t * w1.per_generator[k];
        mix[k].canonicalize();
      }
      double td = t.get_d();
      double chord = (1 - td) * h0 + td * h1;
      double mid = free_entropy(WeightVector::of(m, mix));
      CHECK(mid <= chord + 1e-9);
      CHECK(chord - mid > 0.0);  // strict: distinct endpoints
    }
  }
}

TEST_CASE("entropy blows up monotonically at the simplex boundary") {
  SplitMix64 g{44};
  int cases = 0;
  for (int i = 0; i < 25; ++i) {
    int m = 2 + static_cast<int>(g.bounded(8));
    double prev = -1.0;
    for (long k = 1; k <= 4; ++k) {
      Rat eps(1, 1);
      for (long j = 0; j < k; ++j) eps /= 10;  // 10^-k
      // normalized: first weight eps, rest share (1/2 - eps) equally
      std::vector<Rat> per(static_cast<std::size_t>(m));
      per[0] = eps;
      Rat rest = (Rat(1, 2) - eps) / (m - 1);
      rest.canonicalize();
      for (int j = 1; j < m; ++j) per[static_cast<std::size_t>(j)] = rest;
      double h = free_entropy(WeightVector::of(m, per));
      CHECK(h > prev);
      prev = h;
      ++cases;
    }
  }
  CHECK(cases == 100);
}

TEST_CASE("gradient matches finite differences and the Euler relation") {
  // one generator: the line grows linearly, h == 0 identically, gradient 0
  CHECK(entropy_gradient(WeightVector::of(1, {Rat(3, 2)})) == std::vector<double>{0.0});

  SplitMix64 g{45};
  for (int i = 0; i < 100; ++i) {
    int m = 2 + static_cast<int>(g.bounded(3));
    WeightVector w = random_rat_weights(m, g);
    std::vector<double> wd = w.as_doubles();
    std::vector<double> grad = entropy_gradient(w);
    double h = free_entropy(w);
    double euler = 0.0;
    for (int k = 0; k < m; ++k) {
      CHECK(grad[static_cast<std::size_t>(k)] < 0.0);
      euler += grad[static_cast<std::size_t>(k)] * wd[static_cast<std::size_t>(k)];
      const double step = 1e-5 * wd[static_cast<std::size_t>(k)];
      std::vector<double> hi = wd, lo = wd;
      hi[static_cast<std::size_t>(k)] += step;
      lo[static_cast<std::size_t>(k)] -= step;
      double fd = (free_entropy(hi) - free_entropy(lo)) / (2 * step);
      CHECK(grad[static_cast<std::size_t>(k)] ==
            doctest::Approx(fd).epsilon(2e-4));
    }
    CHECK(euler == doctest::Approx(-h).epsilon(1e-9));
  }
}

TEST_CASE("minimizers concentrate near the uniform point as the slack shrinks") {
  // m=2: parametrize normalized weights as (1/4+x, 1/4-x).
  double h_min2 = 4.0 * std::log(3.0);
  std::vector<std::pair<double, double>> samples;  // (|x|, h)
  for (int k = 0; k < 240; ++k) {
    double x = 0.2499 * std::pow(10.0, -4.0 * k / 239.0);
    double h = free_entropy(std::vector<double>{0.25 + x, 0.25 - x});
    samples.emplace_back(x * std::sqrt(2.0), h);
  }
  double prev_max = 1e9;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    double max_dist = 0.0;
    int admitted = 0;
    for (const auto& [dist, h] : samples)
      if (h <= h_min2 + delta) {
        max_dist = std::max(max_dist, dist);
        ++admitted;
      }
    CHECK(admitted > 0);
    CHECK(max_dist < prev_max);
    prev_max = max_dist;
  }
}

TEST_CASE("projected-gradient minimization recovers the uniform optimum") {
  for (int m : {2, 3}) {
    MinimizeResult r = minimize_free_entropy(m);
    CHECK(r.converged);
    double expect_value = 2.0 * m * std::log(2.0 * m - 1.0);
    CHECK(r.value == doctest::Approx(expect_value).epsilon(1e-8));
    for (double x : r.weights)
      CHECK(std::fabs(x - 1.0 / (2 * m)) < 1e-6);
  }
}

TEST_CASE("generic minimization handles a quadratic objective") {
  // min (w0-0.1)^2 + (w1-0.15)^2 over w0+w1 = 1/2: shift both by 0.125.
  auto objective = [](const std::vector<double>& w) {
    return (w[0] - 0.1) * (w[0] - 0.1) + (w[1] - 0.15) * (w[1] - 0.15);
  };
  MinimizeResult r = minimize_entropy(objective, 2);
  CHECK(r.converged);
  CHECK(r.weights[0] == doctest::Approx(0.225).epsilon(1e-5));
  CHECK(r.weights[1] == doctest::Approx(0.275).epsilon(1e-5));
  auto gradient = [](const std::vector<double>& w) {
    return std::vector<double>{2 * (w[0] - 0.1), 2 * (w[1] - 0.15)};
  };
  MinimizeResult ra = minimize_entropy(objective, 2, {}, gradient);
  CHECK(ra.converged);
  CHECK(ra.weights[0] == doctest::Approx(0.225).epsilon(1e-6));
}

TEST_CASE("free ball counts match closed forms") {
  Presentation free2 = Presentation::make(2, {});
  WeightVector unit2 = WeightVector::unit(2);
  BigInt pow3 = 3;  // closed form |B(R)| = 2 * 3^R - 1
  for (long r = 1; r <= 6; ++r) {
    CHECK(ball_count(free2, unit2, Rat(r)) == 2 * pow3 - 1);
    pow3 *= 3;
  }
  Presentation free1 = Presentation::make(1, {});
  for (long r = 1; r <= 8; ++r)
    CHECK(ball_count(free1, WeightVector::unit(1), Rat(r)) == BigInt(2 * r + 1));
}

TEST_CASE("genus-2 ball counts and geodesic powers") {
  Presentation p = surface_presentation(2);
  WeightVector w = WeightVector::unit(4);
  // Free counts up to radius 3; at radius 4 the sixteen symmetrized relators
  // of length 8 identify one length-4 pair each at their midpoints: the two
  // halves of a relator orbit fuse in pairs, a deficit of exactly 8 against
  // the free count 3201.
  const std::vector<long> expect = {9, 65, 457, 3193};
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(ball_count(p, w, Rat(static_cast<long>(i + 1))) == BigInt(expect[i]));
  std::vector<Rat> d = power_distances(p, w, 1, 4);
  CHECK(d == std::vector<Rat>{Rat(1), Rat(2), Rat(3), Rat(4)});
}

TEST_CASE("ball search guards its preconditions and caps") {
  Presentation torus = Presentation::make(2, {parse_word("abAB", 2)});
  CHECK_THROWS_AS(ball_count(torus, WeightVector::unit(2), Rat(2)), PreconditionError);
  Presentation p = surface_presentation(2);
  BallOptions tiny;
  tiny.node_limit = 10;
  CHECK_THROWS_AS(ball_count(p, WeightVector::unit(4), Rat(4), tiny), ResourceCapError);
  CHECK_THROWS_AS(ball_count(p, WeightVector::unit(2), Rat(1)), InputError);  // arity
  // weight scale too fine for exact int64 bucketing
  BigInt huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 3, 40);
  Presentation free2 = Presentation::make(2, {});
  CHECK_THROWS_AS(
      ball_count(free2, WeightVector::of(2, {Rat(1), Rat(BigInt(1), huge)}), Rat(1)),
      InputError);
}

TEST_CASE("rational-weight balls agree between presentation and step searches") {
  Presentation free2 = Presentation::make(2, {});
  SplitMix64 g{46};
  for (int i = 0; i < 8; ++i) {
    WeightVector w = random_rat_weights(2, g);
    std::vector<WeightedStep> steps = {{{1}, w.per_generator[0]}, {{2}, w.per_generator[1]}};
    for (long num : {1L, 2L, 3L}) {
      Rat radius(num, 1 + static_cast<long>(g.bounded(2)));
      radius.canonicalize();
      CHECK(ball_count(free2, w, radius) == free_ball_count_steps(2, steps, radius));
    }
  }
}

TEST_CASE("free ball distance map returns exact distances") {
  std::vector<WeightedStep> steps = {{{1}, Rat(1)}, {{2}, Rat(1)}};
  std::map<Word, Rat> ball = free_ball_distance_map(2, steps, Rat(3));
  CHECK(ball.size() == 53);
  CHECK(ball.at(Word{}) == Rat(0));
  CHECK(ball.at(parse_word("ab", 2)) == Rat(2));
  CHECK(ball.at(parse_word("aBA", 2)) == Rat(3));
}

TEST_CASE("normalized ball growth approaches the entropy from above") {
  struct Config {
    int m;
    std::vector<Rat> weights;
    long max_radius;
  };
  const std::vector<Config> configs = {
      {1, {Rat(1)}, 8},          {1, {Rat(2)}, 10},
      {2, {Rat(1), Rat(1)}, 9},  {2, {Rat(1), Rat(2)}, 9},
      {2, {Rat(2), Rat(3)}, 10}, {2, {Rat(1), Rat(3)}, 9},
      {3, {Rat(1), Rat(1), Rat(1)}, 6},
      {3, {Rat(1), Rat(1), Rat(2)}, 6},
      {3, {Rat(1), Rat(2), Rat(2)}, 7},
      {2, {Rat(1, 2), Rat(1, 2)}, 4},
  };
  int above_cases = 0, submul_cases = 0;
  for (const Config& c : configs) {
    Presentation fp = Presentation::make(c.m, {});
    WeightVector w = WeightVector::of(c.m, c.weights);
    double h = free_entropy(w);
    Rat wmax(0);
    for (const Rat& q : c.weights) wmax = std::max(wmax, q);

    std::vector<BigInt> count(static_cast<std::size_t>(c.max_radius) + 1);
    count[0] = 1;
    for (long r = 1; r <= c.max_radius; ++r) {
      count[static_cast<std::size_t>(r)] = ball_count(fp, w, Rat(r));
      if (count[static_cast<std::size_t>(r)] == 1) continue;  // no step fits yet
      // ln|B(R)|/R >= h at every nondegenerate radius: approached from above
      double ratio =
          std::log(count[static_cast<std::size_t>(r)].get_d()) / static_cast<double>(r);
      CHECK(ratio >= h - 1e-9);
      ++above_cases;
    }

    // geodesic splitting: |B(r+s)| <= |B(r)| * |B(s + w_max)| exactly
    for (long r = 1; r < c.max_radius; ++r)
      for (long s = 1; r + s <= c.max_radius; ++s) {
        BigInt rhs = count[static_cast<std::size_t>(r)] * ball_count(fp, w, Rat(s) + wmax);
        CHECK(count[static_cast<std::size_t>(r + s)] <= rhs);
        ++submul_cases;
      }
  }
  CHECK(above_cases >= 70);
  CHECK(submul_cases >= 100);

  // for unit weights every radius increment multiplies the sphere, and the
  // normalized logarithm decreases monotonically toward the entropy
  for (int m : {1, 2, 3}) {
    Presentation fp = Presentation::make(m, {});
    WeightVector u = WeightVector::unit(m);
    double h = free_entropy(u);
    double prev = 1e300;
    long max_radius = m == 3 ? 6 : 9;
    for (long r = 1; r <= max_radius; ++r) {
      double ratio = std::log(ball_count(fp, u, Rat(r)).get_d()) / static_cast<double>(r);
      CHECK(ratio >= h - 1e-9);
      CHECK(ratio < prev);
      prev = ratio;
    }
  }
}

TEST_CASE("entropy bounds: free case is tight, verified case sandwiches") {
  Presentation free2 = Presentation::make(2, {});
  WeightVector w = WeightVector::of(2, {Rat(1, 6), Rat(1, 3)});
  EntropyBounds free_eb = entropy_bounds(free2, Rat(1, 16), w);
  CHECK(free_eb.h_lo == doctest::Approx(free_eb.h_hi).epsilon(1e-12));
  CHECK(free_eb.h_hi == doctest::Approx(free_entropy(w)).epsilon(1e-12));

  DensityModelParams dp;
  dp.m = 2;
  dp.ell = 640;
  dp.relator_count_override = 2;
  dp.seed = 7;
  Presentation p = sample_presentation(dp);
  EntropyBounds eb = entropy_bounds(p, Rat(1, 16), w);
  CHECK(eb.h_lo <= eb.h_hi);
  CHECK(eb.h_hi == doctest::Approx(free_entropy(w)).epsilon(1e-12));
  CHECK(eb.h_hi - eb.h_lo < 1e-6 * eb.h_hi);  // desk-scale instance: near-free
  CHECK(eb.integer_weights == std::vector<long>{1, 2});
  CHECK(eb.scale == BigInt(6));
  CHECK(eb.weight_rounding_error == 0.0);

  CHECK_THROWS_AS(entropy_bounds(surface_presentation(2), Rat(1, 16), WeightVector::unit(4)),
                  PreconditionError);
}
