#include "s3map/decision.hpp"

#include <benchmark/benchmark.h>

using namespace s3map;
using arrangement::Alpha;
using arrangement::GroupKind;

namespace {

// (1,2,3,n-6) has a free orbit and deep strata; n = 6 falls back to (1,1,2,2).
Alpha pick(int n) { return n >= 7 ? Alpha{{1, 2, 3, n - 6}} : Alpha{{1, 1, 2, n - 4}}; }

GroupKind kind(const benchmark::State& state) {
    return state.range(1) ? GroupKind::Dihedral : GroupKind::Cyclic;
}

}  // namespace

static void BM_Poset(benchmark::State& state) {
    const Alpha a = pick(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(arrangement::make_poset(a, kind(state)));
}
BENCHMARK(BM_Poset)->ArgsProduct({{6, 9, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_LinkHomology(benchmark::State& state) {
    const auto P = arrangement::make_poset(pick(static_cast<int>(state.range(0))), kind(state));
    poset_topology::LinkOptions opt;
    opt.shadow_check_max_n = 0;
    for (auto _ : state) benchmark::DoNotOptimize(poset_topology::zz_link_homology(P, opt));
    state.counters["elements"] = static_cast<double>(P.size());
}
BENCHMARK(BM_LinkHomology)->ArgsProduct({{6, 9, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_Coinvariants(benchmark::State& state) {
    const auto P = arrangement::make_poset(pick(static_cast<int>(state.range(0))), kind(state));
    const auto link = poset_topology::zz_link_homology(P);
    const auto m = equivariant_module::dualize(link, P);
    for (auto _ : state) benchmark::DoNotOptimize(equivariant_module::coinvariants(m));
    state.counters["rank"] = static_cast<double>(m.rank);
}
BENCHMARK(BM_Coinvariants)->ArgsProduct({{6, 9, 12}, {0, 1}})->Unit(benchmark::kMicrosecond);

static void BM_CellComplexHomology(benchmark::State& state) {
    const auto cx = obstruction::build_cell_complex(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cx.homology());
}
BENCHMARK(BM_CellComplexHomology)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Analyze(benchmark::State& state) {
    const Alpha a = pick(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(decision::analyze(a, kind(state)));
}
BENCHMARK(BM_Analyze)->ArgsProduct({{6, 9, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
