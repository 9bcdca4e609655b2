#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathembed/embedding.hpp"
#include "pathembed/metric.hpp"

namespace pathembed {

/*
 * Group Steiner tree instance. `metric` prices every vertex pair; when the
 * instance comes from a graph, `graph` holds it and solutions must use its
 * edges (metric = shortest-path metric of the graph).
 */
struct GstInstance {
    MetricSpace metric;
    std::optional<Graph> graph;
    std::vector<std::vector<int>> groups;

    int size() const { return metric.size(); }
    int group_count() const { return static_cast<int>(groups.size()); }
};

GstInstance make_gst_instance(MetricSpace metric, std::vector<std::vector<int>> groups);
GstInstance make_gst_instance(Graph graph, std::vector<std::vector<int>> groups);
// Throws InputError on empty/out-of-range groups or a metric/graph mismatch.
void validate_instance(const GstInstance& inst);

struct SteinerSolution {
    std::vector<int> vertices;  // sorted
    std::vector<std::pair<int, int>> edges;
    double cost = 0.0;
};

// Empty string when `sol` is a tree in the instance touching every group
// with the stated cost; otherwise the first problem found.
std::string check_solution(const GstInstance& inst, const SteinerSolution& sol);

// Edge weight in the instance (graph edge weight, or metric distance).
double edge_cost(const GstInstance& inst, int u, int v);

// Minimum spanning tree of `vertices` under the instance metric (ties by index).
SteinerSolution metric_mst(const GstInstance& inst, std::vector<int> vertices);

/*
 * Target instance of a multi-embedding: the target tree as an edge-weighted
 * graph with groups replaced by the union of their members' fibers.
 * Ultrametric targets expand to edges of weight (label(parent) - label(child))/2
 * with equal-label chains contracted; star targets keep the root (weight
 * delta/2 edges) and unit path edges. Steiner-only vertices have no point.
 */
struct ReducedGst {
    GstInstance instance;
    std::vector<int> vertex_point;     // source point, -1 for internal/root vertices
    std::vector<NodeId> vertex_node;   // target node id of each vertex
};

ReducedGst reduce_gst(const MultiEmbedding& me, const GstInstance& inst);

// Exact subset DP on a tree instance; O(vertices * 3^k). k > budget -> BudgetError.
SteinerSolution solve_tree_exact(const GstInstance& inst, int budget = 14);

// Pull a target solution back: drop Steiner vertices (metric MST of the mapped
// vertices in the target), take the image under f, its MST, and for graph
// instances expand edges into shortest paths.
SteinerSolution project_solution(const MultiEmbedding& me, const ReducedGst& reduced, const SteinerSolution& sol,
                                 const GstInstance& inst);

// Metric tree over `sol` -> tree of graph edges with no larger cost.
SteinerSolution expand_to_graph(const GstInstance& inst, const SteinerSolution& sol);

// Brute force: every representative choice, Dreyfus-Wagner per terminal set.
SteinerSolution exact_oracle(const GstInstance& inst, std::size_t budget = 100'000);

// Exact Steiner tree on a fixed terminal set (Dreyfus-Wagner over the metric).
SteinerSolution dreyfus_wagner(const GstInstance& inst, std::vector<int> terminals);

/*
 * Star-of-paths shape: vertex ids of each path in order. Distances must be
 * |i - j| along a path and i + j + delta across paths (positions from the head).
 */
struct StarShape {
    std::vector<std::vector<int>> paths;
};

MetricSpace star_shape_metric(const StarShape& shape, double delta);
std::string check_star_shape(const MetricSpace& m, const StarShape& shape, int s, double delta);

struct GreedyStarResult {
    SteinerSolution solution;
    bool single_path = false;  // phase 1 (interval) won
    std::vector<int> hitting_set;
};

// Best single-path interval versus greedy hitting set over paths.
GreedyStarResult greedy_star_solver(const GstInstance& inst, const StarShape& shape, int s, double delta);

// (1 + 2s/delta)(1 + ln k)
double greedy_star_bound(int s, double delta, int k);

struct GstPipelineReport {
    int target_vertices = 0;
    std::vector<std::size_t> target_group_sizes;
    SteinerSolution target;
    SteinerSolution projected;
    bool has_oracle = false;
    SteinerSolution oracle;
    double alpha_bound = 0.0;
    double bound = 0.0;  // 2 * alpha_bound
    double ratio = 0.0;  // projected / oracle (1 when both are 0)
    bool feasible = true;
    bool holds = true;
};

// reduce -> solve_tree_exact -> project, optionally against exact_oracle.
GstPipelineReport run_gst_pipeline(const MultiEmbedding& me, const GstInstance& inst, bool with_oracle,
                                   int budget = 14);

}  // namespace pathembed
