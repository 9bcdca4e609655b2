#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>

#include "pathembed/embed_ultra.hpp"
#include "pathembed/gst.hpp"
#include "pathembed/mts.hpp"
#include "pathembed/rng.hpp"

using namespace pathembed;

namespace {

std::vector<std::vector<int>> groups_for(int n, int k, Rng& rng) {
    std::vector<std::vector<int>> groups;
    for (int g = 0; g < k; ++g) {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        rng.shuffle(all);
        std::vector<int> group(all.begin(), all.begin() + 2);
        std::sort(group.begin(), group.end());
        groups.push_back(std::move(group));
    }
    return groups;
}

}  // namespace

static void BM_TreeSubsetDp(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    Rng rng(1);
    const GstInstance inst = make_gst_instance(path_graph(64), groups_for(64, k, rng));
    for (auto _ : state) benchmark::DoNotOptimize(solve_tree_exact(inst));
}
BENCHMARK(BM_TreeSubsetDp)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

static void BM_DreyfusWagner(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const GstInstance inst = make_gst_instance(hypercube_graph(5), {{0}});
    std::vector<int> terms;
    for (int i = 0; i < k; ++i) terms.push_back(i * 3);
    for (auto _ : state) benchmark::DoNotOptimize(dreyfus_wagner(inst, terms));
}
BENCHMARK(BM_DreyfusWagner)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

static void BM_GstPipeline(benchmark::State& state) {
    Rng rng(2);
    const GstInstance inst = make_gst_instance(cycle_graph(16), groups_for(16, 4, rng));
    const MultiEmbedding me = build_ultrametric_embedding(inst.metric, 1);
    for (auto _ : state) benchmark::DoNotOptimize(run_gst_pipeline(me, inst, false));
}
BENCHMARK(BM_GstPipeline)->Unit(benchmark::kMicrosecond);

static void BM_MtsOfflineAndOnline(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const MetricSpace m = random_metric(n, 3);
    Rng rng(4);
    std::vector<std::vector<double>> tasks(64, std::vector<double>(n));
    for (auto& t : tasks) {
        for (double& c : t) c = static_cast<double>(rng.uniform_int(0, 10));
    }
    const MtsInstance inst = make_mts_instance(m, tasks);
    for (auto _ : state) {
        benchmark::DoNotOptimize(offline_opt(inst));
        benchmark::DoNotOptimize(wfa_online(inst));
    }
}
BENCHMARK(BM_MtsOfflineAndOnline)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);
