#include <benchmark/benchmark.h>

#include "polyq/cfi.hpp"
#include "polyq/closure.hpp"
#include "polyq/color_refinement.hpp"
#include "polyq/cops_robber.hpp"
#include "polyq/csp.hpp"
#include "polyq/graph.hpp"
#include "polyq/pebble_game.hpp"

using namespace polyq;

namespace {

OrderedGraph cubic(std::size_t n) {
    auto g = generate_regular(3, n, 4, GenerateOptions{1, 1000});
    if (!g) throw std::runtime_error("no cubic graph");
    return *g;
}

}  // namespace

static void BM_SolveXorCfi(benchmark::State& st) {
    auto g = cubic(static_cast<std::size_t>(st.range(0)));
    auto sys = structure_to_xor(cfi_odd(g).structure);
    for (auto _ : st) benchmark::DoNotOptimize(solve_xor(sys));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_SolveXorCfi)->RangeMultiplier(2)->Range(16, 256)->Complexity();

// Backtracking homomorphism search into C3; the even instance has a solution.
static void BM_HomomorphismCfiEven(benchmark::State& st) {
    auto g = cubic(static_cast<std::size_t>(st.range(0)));
    auto a = cfi_even(g).structure;
    auto t = build_c_ell(3);
    for (auto _ : st) benchmark::DoNotOptimize(find_homomorphism(a, t));
}
BENCHMARK(BM_HomomorphismCfiEven)->Arg(8)->Arg(12)->Arg(16);

static void BM_ColorRefinement(benchmark::State& st) {
    auto g = cubic(static_cast<std::size_t>(st.range(0)));
    auto a = graph_to_structure(g);
    for (auto _ : st) benchmark::DoNotOptimize(color_refinement(a));
}
BENCHMARK(BM_ColorRefinement)->RangeMultiplier(4)->Range(16, 1024);

static void BM_CopsRobber(benchmark::State& st) {
    auto g = st.range(0) == 0 ? complete_graph(4) : complete_bipartite(3, 3);
    auto k = static_cast<std::size_t>(st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(solve_cr_game(g, k, 3).passes());
}
BENCHMARK(BM_CopsRobber)->Args({0, 1})->Args({0, 2})->Args({1, 1})->Args({1, 2});

static void BM_PebbleC6vs2C3(benchmark::State& st) {
    auto a = graph_to_structure(cycle_graph(6));
    auto b = graph_to_structure(disjoint_union(cycle_graph(3), cycle_graph(3)));
    PGConfig cfg;
    cfg.k = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(solve_pebble_game(a, b, cfg).winner());
}
BENCHMARK(BM_PebbleC6vs2C3)->Arg(1)->Arg(2);

static void BM_PebbleCfiSwitchSets(benchmark::State& st) {
    auto g = complete_graph(4);
    auto a = cfi_even(g).structure;
    auto b = cfi_odd(g).structure;
    PGConfig cfg;
    cfg.k = 1;
    cfg.family = PartialFunctionFamily::nowhere(3);
    cfg.bijections = switch_set_bijections(g.edge_count());
    for (auto _ : st) benchmark::DoNotOptimize(solve_pebble_game(a, b, cfg).winner());
}
BENCHMARK(BM_PebbleCfiSwitchSets)->Unit(benchmark::kMillisecond);

static void BM_ClosureCensus(benchmark::State& st) {
    auto k = csp_class(build_c_ell(3));
    CensusOptions opts;
    opts.max_n = 3;
    opts.max_tuples = static_cast<std::size_t>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(is_p_closed(k, PartialFunctionFamily::near_unanimity(3), opts));
}
BENCHMARK(BM_ClosureCensus)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
