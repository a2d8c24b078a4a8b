#include <benchmark/benchmark.h>

#include "blic/criteria.hpp"
#include "blic/potts.hpp"
#include "blic/samplers.hpp"

namespace {

using namespace blic;

// Recursion on one b x b block with random evidence: args = b, K, G8?
void BM_LogPartitionRecursive(benchmark::State& state) {
  const auto b = static_cast<std::size_t>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const Neighborhood g = state.range(2) ? Neighborhood::G8 : Neighborhood::G4;
  const PottsSpec spec{Lattice(b, b), g, K, 0.8};
  Rng rng(1);
  SitePotentials pot(b * b, K);
  for (std::size_t i = 0; i < b * b; ++i)
    for (int k = 0; k < K; ++k) pot(i, k) = rng.normal();
  const Block blk{0, 0, b, b};
  for (auto _ : state) benchmark::DoNotOptimize(log_partition_recursive(spec, blk, &pot));
}
BENCHMARK(BM_LogPartitionRecursive)
    ->Args({2, 7, 0})
    ->Args({2, 7, 1})
    ->Args({4, 2, 1})
    ->Args({4, 4, 0})
    ->Args({4, 4, 1});

void BM_SwendsenWang(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Neighborhood g = state.range(1) ? Neighborhood::G8 : Neighborhood::G4;
  const PottsSpec spec{Lattice(side, side), g, 4, g == Neighborhood::G8 ? 0.4 : 1.0};
  const auto edge_list = edges(spec.lattice, g);
  Rng rng(2);
  ChainState st{uniform_field(spec.lattice.size(), 4, rng), 0, Rng(3)};
  for (auto _ : state) swendsen_wang_step(st, spec, edge_list);
  state.SetItemsProcessed(state.iterations() * spec.lattice.size());
}
BENCHMARK(BM_SwendsenWang)->Args({48, 0})->Args({48, 1})->Args({100, 0});

void BM_GibbsSweep(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const PottsSpec spec{Lattice(side, side), Neighborhood::G4, 4, 1.0};
  const Adjacency adj(spec.lattice, spec.system);
  Rng rng(4);
  ChainState st{uniform_field(spec.lattice.size(), 4, rng), 0, Rng(5)};
  for (auto _ : state) gibbs_sweep(st, spec, adj);
  state.SetItemsProcessed(state.iterations() * spec.lattice.size());
}
BENCHMARK(BM_GibbsSweep)->Arg(48)->Arg(100);

// Whole-lattice criterion: args = b, K
void BM_Blic(benchmark::State& state) {
  const auto b = static_cast<std::size_t>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const Lattice lat(48, 48);
  Rng rng(6);
  std::vector<double> y(lat.size());
  for (double& v : y) v = rng.uniform_int(K) + 0.5 * rng.normal();
  const HiddenPottsParams th{EmissionParams::integer_means(K, 0.5), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(blic::blic(y, lat, b, th, {Neighborhood::G4, K}));
}
BENCHMARK(BM_Blic)->Args({1, 4})->Args({2, 4})->Args({2, 7})->Args({4, 4});

}  // namespace

BENCHMARK_MAIN();
