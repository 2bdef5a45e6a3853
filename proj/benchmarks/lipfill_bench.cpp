#include <benchmark/benchmark.h>

#include "lipfill/harness.hpp"
#include "lipfill/oracle.hpp"

using namespace lipfill;

namespace {

FixtureSpec grid(int side, int refine) {
  FixtureSpec s;
  s.name = "grid";
  s.generator = Generator::Grid;
  s.params = {side, side};
  s.refine = refine;
  return s;
}

void BM_BuildFixture(benchmark::State& state) {
  const auto spec = grid(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(build_fixture(spec));
}
BENCHMARK(BM_BuildFixture)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_CoverAndNerve(benchmark::State& state) {
  const auto f = build_fixture(grid(7, 8));
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    const auto family = build_cover(f.space, f.z, eps);
    benchmark::DoNotOptimize(build_nerve(family));
  }
}
BENCHMARK(BM_CoverAndNerve)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FillInZ(benchmark::State& state) {
  const auto f = build_fixture(grid(7, 8));
  const auto& alpha = f.cycles.front().chain;
  const double eps = 2.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fill_in_Z(f.space, f.z, alpha, eps));
}
BENCHMARK(BM_FillInZ)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MinimalFilling(benchmark::State& state) {
  const auto f = build_fixture(grid(static_cast<int>(state.range(0)), 2));
  const auto& alpha = f.cycles.front().chain;
  for (auto _ : state) benchmark::DoNotOptimize(minimal_filling(f.space, f.z.members, alpha));
}
BENCHMARK(BM_MinimalFilling)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
