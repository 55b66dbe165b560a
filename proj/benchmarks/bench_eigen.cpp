#include <benchmark/benchmark.h>

#include "pucci/eigen.hpp"
#include "pucci/random.hpp"

namespace {

void BM_JacobiEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pucci::Rng rng(1);
  const pucci::SymMat x = pucci::random_symmetric(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(pucci::eigenvalues_sorted(x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_JacobiEigenvalues)->DenseRange(2, 16, 2)->Complexity();

void BM_JacobiEigenvectors(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pucci::Rng rng(2);
  const pucci::SymMat x = pucci::random_symmetric(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(pucci::eigen_sorted(x));
}
BENCHMARK(BM_JacobiEigenvectors)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
