#include <benchmark/benchmark.h>

#include "tokmc/marking.hpp"
#include "tokmc/model_checker.hpp"
#include "tokmc/system.hpp"

using namespace tokmc;

static void BM_Destutter(benchmark::State& state) {
  Word w;
  for (int i = 0; i < state.range(0); ++i) w.push_back(i % 3 ? "a" : "b");
  for (auto _ : state) benchmark::DoNotOptimize(destutter(w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Destutter)->Range(64, 4096)->Complexity();

static void BM_BuildMutexRing(benchmark::State& state) {
  auto tpl = builtin_template("mutex");
  for (auto _ : state) {
    auto sys = build_system(tpl, make_ring(static_cast<int>(state.range(0))));
    benchmark::DoNotOptimize(sys.lts.num_states);
  }
}
BENCHMARK(BM_BuildMutexRing)->DenseRange(4, 10, 2);

static void BM_MarkRing(benchmark::State& state) {
  Topology g = make_ring(12);
  IndexTuple t{{1, 5, 9}};
  for (auto _ : state) {
    auto mt = mark(g, t, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(mt.table.size());
  }
}
BENCHMARK(BM_MarkRing)->DenseRange(1, 3);

static void BM_ContractClique(benchmark::State& state) {
  Topology g = make_clique(static_cast<int>(state.range(0)));
  IndexTuple t{{1, 2}};
  for (auto _ : state) {
    auto c = contract(g, t, 2);
    benchmark::DoNotOptimize(c.num_classes());
  }
}
BENCHMARK(BM_ContractClique)->DenseRange(4, 8, 2);

static void BM_CheckAdjacencyRing(benchmark::State& state) {
  auto tpl = builtin_template("shuttle");
  auto f = itl::gen_adj_formula();
  Topology g = make_ring(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = check_indexed(tpl, g, f, FairnessSpec::Mode::token_global);
    benchmark::DoNotOptimize(r.holds);
  }
}
BENCHMARK(BM_CheckAdjacencyRing)->DenseRange(5, 7);

BENCHMARK_MAIN();
