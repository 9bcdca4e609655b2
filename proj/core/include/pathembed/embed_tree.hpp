#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pathembed/embedding.hpp"
#include "pathembed/metric.hpp"
#include "pathembed/star_tree.hpp"

namespace pathembed {

struct StarBuildOptions {
    std::size_t node_budget = 10'000'000;
};

/*
 * Star-of-paths multi-embedding of an unweighted connected graph: every walk
 * of exactly s edges, from every start vertex in lexicographic order, becomes
 * a path of s+1 unit-spaced nodes hung from the root by an edge of weight
 * delta/2, delta being the graph diameter.
 */
MultiEmbedding build_path_star(const Graph& g, int s, const StarBuildOptions& options = {});
// Same, for a metric that is the shortest-path metric of its unit-distance graph.
MultiEmbedding build_path_star(const MetricSpace& m, int s, const StarBuildOptions& options = {});

// Number of walks of exactly s edges (saturates at UINT64_MAX).
std::uint64_t walk_count(const Graph& g, int s);

// ceil(h / log2 h), at least 1.
int hypercube_s(int h);

struct StarRealization {
    RepPath path;
    double source_length = 0.0;
    int chunks = 0;
    double chunk_bound = 0.0;  // 2 l + (chunks - 1) delta
    double ratio_bound = 0.0;  // (2 + delta / s) l
};

// Chunked realization of a source walk (consecutive points at distance 1).
StarRealization realize_in_star(const MultiEmbedding& me, const PointPath& p);

struct StarAudit {
    int node_count = 0;
    std::size_t path_count = 0;
    double walk_bound = 0.0;  // n d^s
    double size_bound = 0.0;  // 1 + n (s + 1) d^s
    bool exhaustive_pairs = false;
    std::size_t pairs_checked = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// Size bound, walk validity of every path, fibers, and non-contractivity
// (all node pairs up to 2000 nodes, otherwise `samples` seeded random pairs).
StarAudit audit_star(const MultiEmbedding& me, std::size_t samples = 200'000, std::uint64_t seed = 0);

}  // namespace pathembed
