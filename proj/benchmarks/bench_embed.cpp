#include <benchmark/benchmark.h>

#include "pathembed/embed_tree.hpp"
#include "pathembed/embed_ultra.hpp"
#include "pathembed/prob.hpp"

using namespace pathembed;

static void BM_UltraPath(benchmark::State& state) {
    const MetricSpace m = from_graph(path_graph(static_cast<int>(state.range(0))));
    const int t = static_cast<int>(state.range(1));
    int leaves = 0;
    for (auto _ : state) {
        const MultiEmbedding me = build_ultrametric_embedding(m, t);
        leaves = me.ultra().leaf_count();
        benchmark::DoNotOptimize(leaves);
    }
    state.counters["leaves"] = leaves;
}
BENCHMARK(BM_UltraPath)->ArgsProduct({{16, 64, 256}, {1, 2, 3}})->Unit(benchmark::kMillisecond);

static void BM_UltraRandomMetric(benchmark::State& state) {
    const MetricSpace m = random_metric(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(build_ultrametric_embedding(m, 2));
}
BENCHMARK(BM_UltraRandomMetric)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

static void BM_PathStarHypercube(benchmark::State& state) {
    const int h = static_cast<int>(state.range(0));
    const Graph g = hypercube_graph(h);
    for (auto _ : state) benchmark::DoNotOptimize(build_path_star(g, hypercube_s(h)));
}
BENCHMARK(BM_PathStarHypercube)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_SampleTree(benchmark::State& state) {
    const MetricSpace m = random_metric(static_cast<int>(state.range(0)), 2);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_tree_embedding(m, seed++));
}
BENCHMARK(BM_SampleTree)->RangeMultiplier(4)->Range(16, 256);
