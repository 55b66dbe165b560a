#include <benchmark/benchmark.h>

#include "pucci/operators.hpp"
#include "pucci/random.hpp"

namespace {

void BM_PucciPlus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  pucci::Rng rng(3);
  const pucci::SymMat x = pucci::random_symmetric(n, rng);
  const pucci::Ellipticity ell(0.5, 2.0, p);
  for (auto _ : state) benchmark::DoNotOptimize(pucci::pucci_plus_p(x, ell));
}
BENCHMARK(BM_PucciPlus)->Args({2, 1})->Args({4, 2})->Args({6, 3})->Args({6, 6});

void BM_PucciPlusRestricted(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  pucci::Rng rng(4);
  const pucci::SymMat x = pucci::random_symmetric(n, rng);
  const pucci::Frame w = pucci::random_frame(n, p, rng);
  const pucci::Ellipticity ell(0.5, 2.0, p);
  for (auto _ : state) benchmark::DoNotOptimize(pucci::pucci_plus_W(x, w, ell));
}
BENCHMARK(BM_PucciPlusRestricted)->Args({4, 2})->Args({6, 3});

// One matrix of the property sweep: all p-order evaluations plus a frame draw.
void BM_PropertySample(benchmark::State& state) {
  pucci::Rng rng(5);
  for (auto _ : state) {
    const pucci::SymMat x = pucci::random_symmetric(5, rng);
    const pucci::SymMat y = pucci::random_symmetric(5, rng);
    const pucci::Ellipticity ell(1.0, 2.0, 3);
    benchmark::DoNotOptimize(pucci::pucci_plus_p(x + y, ell) - pucci::pucci_plus_p(x, ell) -
                             pucci::pucci_minus_p(y, ell));
    benchmark::DoNotOptimize(pucci::check_inclusions(x, 1.0, 2.0, 3));
  }
}
BENCHMARK(BM_PropertySample);

}  // namespace
