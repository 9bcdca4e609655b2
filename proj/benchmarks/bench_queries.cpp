#include <benchmark/benchmark.h>

#include "pathembed/embed_tree.hpp"
#include "pathembed/embed_ultra.hpp"
#include "pathembed/realize.hpp"

using namespace pathembed;

static void BM_LeafDistance(benchmark::State& state) {
    const MultiEmbedding me = build_ultrametric_embedding(from_graph(path_graph(static_cast<int>(state.range(0)))), 2);
    const auto leaves = me.ultra().leaves();
    Rng rng(1);
    std::vector<std::pair<NodeId, NodeId>> queries;
    for (int i = 0; i < 4096; ++i) queries.emplace_back(leaves[rng.index(leaves.size())], leaves[rng.index(leaves.size())]);
    std::size_t q = 0;
    for (auto _ : state) {
        const auto& [a, b] = queries[q++ & 4095];
        benchmark::DoNotOptimize(me.ultra().distance(a, b));
    }
}
BENCHMARK(BM_LeafDistance)->Arg(64)->Arg(256);

static void BM_RealizeWalk(benchmark::State& state) {
    const MetricSpace m = from_graph(cycle_graph(128));
    const MultiEmbedding me = build_ultrametric_embedding(m, 2);
    Rng rng(2);
    const PointPath p = sample_walk(m, static_cast<int>(state.range(0)), WalkMode::local, rng);
    for (auto _ : state) benchmark::DoNotOptimize(realize_path(me, p));
}
BENCHMARK(BM_RealizeWalk)->RangeMultiplier(4)->Range(16, 1024);

static void BM_OptimalAncestorDp(benchmark::State& state) {
    const MetricSpace m = from_graph(cycle_graph(128));
    const MultiEmbedding me = build_ultrametric_embedding(m, 2);
    Rng rng(3);
    const PointPath p = sample_walk(m, static_cast<int>(state.range(0)), WalkMode::local, rng);
    for (auto _ : state) benchmark::DoNotOptimize(optimal_rep_path(me, p));
}
BENCHMARK(BM_OptimalAncestorDp)->RangeMultiplier(4)->Range(16, 1024);

static void BM_OptimalPairwiseDp(benchmark::State& state) {
    const MetricSpace m = from_graph(cycle_graph(128));
    const MultiEmbedding me = build_ultrametric_embedding(m, 2);
    Rng rng(3);
    const PointPath p = sample_walk(m, static_cast<int>(state.range(0)), WalkMode::local, rng);
    for (auto _ : state) benchmark::DoNotOptimize(optimal_rep_path_pairwise(me, p));
}
BENCHMARK(BM_OptimalPairwiseDp)->RangeMultiplier(4)->Range(16, 256);

static void BM_OptimalStarDp(benchmark::State& state) {
    const int h = static_cast<int>(state.range(0));
    const MultiEmbedding me = build_path_star(hypercube_graph(h), hypercube_s(h));
    Rng rng(4);
    const PointPath p = sample_walk(me.source, 64, WalkMode::local, rng);
    for (auto _ : state) benchmark::DoNotOptimize(optimal_rep_path(me, p));
}
BENCHMARK(BM_OptimalStarDp)->DenseRange(3, 5)->Unit(benchmark::kMicrosecond);

static void BM_RealizeInStar(benchmark::State& state) {
    const MultiEmbedding me = build_path_star(hypercube_graph(5), 3);
    Rng rng(5);
    const PointPath p = sample_walk(me.source, static_cast<int>(state.range(0)), WalkMode::local, rng);
    for (auto _ : state) benchmark::DoNotOptimize(realize_in_star(me, p));
}
BENCHMARK(BM_RealizeInStar)->RangeMultiplier(4)->Range(16, 1024);
