#include <benchmark/benchmark.h>

#include "pucci/grid.hpp"
#include "pucci/solver.hpp"

namespace {

pucci::ModelParams disk_model() {
  pucci::ModelParams mp;
  mp.lambda = 1.0;
  mp.Lambda = 1.0;
  mp.p = 2;
  mp.delta = 1.0;
  return mp;
}

void BM_SchemeResidual(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const pucci::Stencil stencil(width);
  const pucci::Grid2D grid(pucci::Domain::disk(1.0), 1.0 / 64.0, stencil);
  const pucci::GridField u = grid.sample([](double x, double y) { return x * x - 0.5 * y * y; });
  const pucci::GridField f(grid.size(), -1.0);
  for (auto _ : state) benchmark::DoNotOptimize(pucci::scheme_residual(grid, stencil, disk_model(), u, f));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * grid.interior().size()));
}
BENCHMARK(BM_SchemeResidual)->Arg(1)->Arg(2)->Arg(3);

void BM_SolveCoarseDisk(benchmark::State& state) {
  const pucci::Stencil stencil(1);
  const pucci::Grid2D grid(pucci::Domain::disk(1.0), 1.0 / static_cast<double>(state.range(0)), stencil);
  const pucci::GridField f(grid.size(), -1.0);
  const pucci::GridField g(grid.size(), 0.0);
  pucci::SolveOptions opts;
  opts.tol = 1e-8;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(pucci::solve(grid, stencil, disk_model(), f, g, opts).interior_max);
}
BENCHMARK(BM_SolveCoarseDisk)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
