#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "pathembed/gst.hpp"
#include "pathembed/metric.hpp"
#include "pathembed/mts.hpp"
#include "pathembed/realize.hpp"
#include "pathembed/rng.hpp"

namespace pathembed::testgen {

// One generator configuration per kind at point count n (hypercube: 2^h = n).
inline std::vector<GeneratorSpec> specs_for(int n, std::uint64_t seed) {
    std::vector<GeneratorSpec> out;
    out.push_back({GeneratorKind::path, n, 0, 3, seed});
    out.push_back({GeneratorKind::cycle, n, 0, 3, seed});
    int h = 0;
    while ((1 << h) < n) ++h;
    if ((1 << h) == n && h >= 1) out.push_back({GeneratorKind::hypercube, 0, h, 3, seed});
    if (n >= 4 && n % 2 == 0) out.push_back({GeneratorKind::random_regular, n, 0, 3, seed});
    out.push_back({GeneratorKind::random_metric, n, 0, 3, seed});
    return out;
}

inline std::string describe(const GeneratorSpec& s) {
    std::string name = to_string(s.kind);
    if (s.kind == GeneratorKind::hypercube) return name + " h=" + std::to_string(s.h);
    return name + " n=" + std::to_string(s.n) + " seed=" + std::to_string(s.seed);
}

// Integer-weighted metric: random positive integers closed under shortest paths.
inline MetricSpace random_integral_metric(int n, int max_w, Rng& rng) {
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double w = static_cast<double>(rng.uniform_int(1, max_w));
            d[i * n + j] = d[j * n + i] = w;
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
        }
    }
    return MetricSpace(n, std::move(d));
}

// Random labelled tree with integer weights in [1, max_w] (parent of i is below i).
inline Graph random_tree(int n, int max_w, Rng& rng) {
    Graph g;
    g.n = n;
    for (int i = 1; i < n; ++i) {
        const int p = static_cast<int>(rng.index(static_cast<std::size_t>(i)));
        const double w = static_cast<double>(rng.uniform_int(1, max_w));
        if (w != 1.0) g.unweighted = false;
        g.edges.push_back({p, i, w});
    }
    return g;
}

// Random connected graph: a random tree plus `extra` random chords.
inline Graph random_connected_graph(int n, int extra, int max_w, Rng& rng) {
    Graph g = random_tree(n, max_w, rng);
    for (int e = 0; e < extra && n >= 3; ++e) {
        const int u = static_cast<int>(rng.index(n));
        const int v = static_cast<int>(rng.index(n));
        if (u == v) continue;
        const double w = static_cast<double>(rng.uniform_int(1, max_w));
        if (w != 1.0) g.unweighted = false;
        g.edges.push_back({u, v, w});
    }
    return g;
}

// k groups of 1..max_size distinct vertices of [0, n).
inline std::vector<std::vector<int>> random_groups(int n, int k, int max_size, Rng& rng) {
    std::vector<std::vector<int>> groups;
    for (int g = 0; g < k; ++g) {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        rng.shuffle(all);
        const int size = static_cast<int>(rng.uniform_int(1, std::min(max_size, n)));
        std::vector<int> group(all.begin(), all.begin() + size);
        std::sort(group.begin(), group.end());
        groups.push_back(std::move(group));
    }
    return groups;
}

// Random source path of `len` points, consecutive points may repeat.
inline PointPath random_point_path(int n, int len, Rng& rng) {
    PointPath p;
    for (int i = 0; i < len; ++i) p.push_back(static_cast<int>(rng.index(n)));
    return p;
}

// Integer task costs in [0, max_c]; with probability `forbid` a cost is infinite.
inline std::vector<std::vector<double>> random_tasks(int n, int m, int max_c, double forbid, Rng& rng) {
    std::vector<std::vector<double>> tasks(m, std::vector<double>(n));
    for (auto& t : tasks) {
        for (double& c : t) {
            c = rng.uniform01() < forbid ? kMtsInfinity : static_cast<double>(rng.uniform_int(0, max_c));
        }
    }
    return tasks;
}

// Brute-force MTS optimum over all n^m schedules.
inline double brute_force_mts(const MtsInstance& inst) {
    const int n = inst.space.size();
    const int m = static_cast<int>(inst.tasks.size());
    if (m == 0) return 0.0;
    std::vector<int> states(m, 0);
    double best = kMtsInfinity;
    while (true) {
        best = std::min(best, schedule_cost(inst, states));
        int i = 0;
        while (i < m && ++states[i] == n) states[i++] = 0;
        if (i == m) break;
    }
    return best;
}

// Exhaustive minimum over all representative choices; visits prod |fibers| sequences.
inline double brute_force_rep_path(const MultiEmbedding& me, const PointPath& p) {
    if (p.empty()) return 0.0;
    std::vector<std::size_t> pick(p.size(), 0);
    double best = INFINITY;
    std::vector<NodeId> seq(p.size());
    while (true) {
        for (std::size_t i = 0; i < p.size(); ++i) seq[i] = me.fibers[p[i]][pick[i]];
        best = std::min(best, rep_length(me, seq));
        std::size_t i = 0;
        while (i < p.size() && ++pick[i] == me.fibers[p[i]].size()) pick[i++] = 0;
        if (i == p.size()) break;
    }
    return best;
}

inline double fiber_product(const MultiEmbedding& me, const PointPath& p) {
    double prod = 1.0;
    for (int x : p) prod *= static_cast<double>(me.fibers[x].size());
    return prod;
}

// Exhaustive group Steiner optimum on tiny instances: every vertex subset
// touching all groups, priced by its metric Steiner tree via Dreyfus-Wagner.
inline double brute_force_gst(const GstInstance& inst) {
    const int n = inst.size();
    double best = INFINITY;
    for (int mask = 1; mask < (1 << n); ++mask) {
        bool hits = true;
        for (const auto& g : inst.groups) {
            bool any = false;
            for (int v : g) any = any || (mask >> v & 1);
            hits = hits && any;
        }
        if (!hits) continue;
        std::vector<int> terms;
        for (int v = 0; v < n; ++v) {
            if (mask >> v & 1) terms.push_back(v);
        }
        best = std::min(best, dreyfus_wagner(inst, terms).cost);
    }
    return best;
}

}  // namespace pathembed::testgen
