// Micro-benchmarks for the hot paths: the entropy solver, symmetrized-closure
// scans, forbidden-set counting, exact ball search, and word sampling.
// Not registered with ctest; run the wwm_bench binary directly.

#include <benchmark/benchmark.h>

#include "wwm/avoidance.hpp"
#include "wwm/entropy.hpp"
#include "wwm/presentation.hpp"
#include "wwm/random_groups.hpp"
#include "wwm/rng.hpp"

using namespace wwm;

namespace {

Presentation sampled(std::uint64_t seed, int m, long ell, long relators) {
  DensityModelParams dp;
  dp.m = m;
  dp.ell = ell;
  dp.seed = seed;
  dp.relator_count_override = relators;
  return sample_presentation(dp);
}

void BM_free_entropy_uniform(benchmark::State& state) {
  WeightVector u = WeightVector::uniform_normalized(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(free_entropy(u));
}
BENCHMARK(BM_free_entropy_uniform)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_entropy_gradient(benchmark::State& state) {
  WeightVector u = WeightVector::uniform_normalized(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(entropy_gradient(u));
}
BENCHMARK(BM_entropy_gradient)->Arg(2)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_small_cancellation_closure(benchmark::State& state) {
  Presentation p = sampled(7, 2, state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_c_prime_closure(p, Rat(1, 16)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_small_cancellation_closure)
    ->Arg(64)
    ->Arg(256)
    ->Arg(1024)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity();

void BM_even_distribution_closure(benchmark::State& state) {
  Presentation p = sampled(7, 2, state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(check_even_distribution_closure(p, Rat(1, 16)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_even_distribution_closure)
    ->Arg(256)
    ->Arg(1024)
    ->Arg(4096)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity();

void BM_automaton_growth_rate(benchmark::State& state) {
  Presentation p = sampled(61, 2, state.range(0), 2);
  ForbiddenSet f = build_forbidden_set(p, Rat(1, 16));
  WeightVector w = WeightVector::of(2, {Rat(1), Rat(2)});
  for (auto _ : state) benchmark::DoNotOptimize(growth_rate(f, w));
}
BENCHMARK(BM_automaton_growth_rate)->Arg(96)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_count_avoiding_automaton(benchmark::State& state) {
  ForbiddenSet f = inverse_pair_patterns(2);
  WeightVector w = WeightVector::unit(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(count_avoiding(f, w, state.range(0), CountMode::automaton));
}
BENCHMARK(BM_count_avoiding_automaton)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_certificate_root(benchmark::State& state) {
  Presentation p = sampled(11, 2, state.range(0), 1);
  WeightVector w = WeightVector::unit(2);
  for (auto _ : state) benchmark::DoNotOptimize(p_largest_root(p, Rat(1, 16), w));
}
BENCHMARK(BM_certificate_root)->Arg(2560)->Arg(10240)->Unit(benchmark::kMillisecond);

void BM_ball_count_free(benchmark::State& state) {
  Presentation free2 = Presentation::make(2, {});
  WeightVector u = WeightVector::unit(2);
  for (auto _ : state) benchmark::DoNotOptimize(ball_count(free2, u, Rat(state.range(0))));
}
BENCHMARK(BM_ball_count_free)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_ball_count_quotient(benchmark::State& state) {
  Presentation q = sampled(3, 2, 64, 2);  // C'(1/6) at this seed
  WeightVector u = WeightVector::unit(2);
  for (auto _ : state) benchmark::DoNotOptimize(ball_count(q, u, Rat(state.range(0))));
}
BENCHMARK(BM_ball_count_quotient)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_sample_cyclically_reduced(benchmark::State& state) {
  SplitMix64 g{99};
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_cyclically_reduced_word(2, state.range(0), g));
}
BENCHMARK(BM_sample_cyclically_reduced)->Arg(1024)->Arg(65536)->Unit(benchmark::kMicrosecond);

void BM_dehn_reduce(benchmark::State& state) {
  Presentation q = symmetrized_presentation(sampled(3, 2, 64, 2));
  SplitMix64 g{7};
  Word w = sample_reduced_word(2, 48, g);
  for (auto _ : state) benchmark::DoNotOptimize(dehn_reduce(w, q));
}
BENCHMARK(BM_dehn_reduce)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
