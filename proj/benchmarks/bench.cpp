// Micro-benchmarks for the hot paths: composition, normalization,
// preservation checking, classification, and the factorization schemes.

#include <benchmark/benchmark.h>

#include "fencenat/block_stream.hpp"
#include "fencenat/factorization.hpp"
#include "fencenat/fence_map.hpp"
#include "fencenat/generators.hpp"
#include "fencenat/invariants.hpp"

using namespace fencenat;

namespace {

FenceMap busy_map() {
  // a composite with a long prefix, several collapse blocks, and a
  // non-trivial periodic tail
  return compose(compose(collapse_witness(), beta_gen(4)),
                 alpha_family(SubsetSpec::evens()));
}

FenceMap unfolded_witness() {
  // collapse_witness() written with its period tripled: normalization has
  // to fold the description back down
  return FenceMap({}, 1, 12, 6, {1, 2, 2, 2, 3, 4, 4, 4, 5, 6, 6, 6});
}

void BM_compose(benchmark::State& state) {
  const FenceMap a = busy_map();
  const FenceMap b = collapse_witness();
  for (auto _ : state) {
    FenceMap c = compose(a, b);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_compose);

void BM_normalize_unfolded(benchmark::State& state) {
  const FenceMap m = unfolded_witness();
  for (auto _ : state) {
    FenceMap canon = m.normalized();
    benchmark::DoNotOptimize(canon);
  }
}
BENCHMARK(BM_normalize_unfolded);

void BM_is_fence_preserving(benchmark::State& state) {
  const FenceMap m = busy_map();
  for (auto _ : state) {
    bool ok = is_fence_preserving(m);
    benchmark::DoNotOptimize(ok);
  }
}
BENCHMARK(BM_is_fence_preserving);

void BM_classify(benchmark::State& state) {
  const FenceMap m = busy_map();
  for (auto _ : state) {
    ClassReport report = classify(m, 3);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_classify);

void BM_theta_lambda_factor(benchmark::State& state) {
  const FenceMap m = busy_map();
  for (auto _ : state) {
    auto split = theta_lambda_factor(m, 4);
    benchmark::DoNotOptimize(split);
  }
}
BENCHMARK(BM_theta_lambda_factor);

void BM_g_word(benchmark::State& state) {
  const FenceMap m = beta_gen(4);
  for (auto _ : state) {
    GeneratorWord w = g_word(m, 2);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_g_word);

void BM_k_split(benchmark::State& state) {
  const FenceMap m = collapse_witness();
  for (auto _ : state) {
    auto split = k_split(m);
    benchmark::DoNotOptimize(split);
  }
}
BENCHMARK(BM_k_split);

}  // namespace

BENCHMARK_MAIN();
