#include <benchmark/benchmark.h>

#include "bloch2d/lattice.hpp"

static void BM_edge_orbits_honeycomb(benchmark::State& state) {
  auto m = bloch2d::honeycomb();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bloch2d::edge_orbits(m));
  }
}
BENCHMARK(BM_edge_orbits_honeycomb);

BENCHMARK_MAIN();
