#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pathembed/metric.hpp"
#include "pathembed/star_tree.hpp"
#include "pathembed/ultrametric.hpp"

namespace pathembed {

enum class Criterion { size, diameter, none };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& name);

enum class EmbeddingKind { ultra, star, prob };

std::string to_string(EmbeddingKind k);
EmbeddingKind parse_embedding_kind(const std::string& name);

struct EmbeddingParams {
    EmbeddingKind kind = EmbeddingKind::ultra;
    int t = 0;  // shell count of the ultrametric construction, 0 when not applicable
    double beta = 0.0;
    Criterion criterion = Criterion::none;
    int s = 0;  // star path length
    double source_diameter = 0.0;
    double source_aspect_ratio = 1.0;
    int criterion_fallbacks = 0;  // diameter-branch subproblems solved with the size rule
};

/*
 * Surjection f from the target's mapped nodes onto the source points. The
 * fibers f^-1(x) hold target node ids in increasing order.
 */
struct MultiEmbedding {
    MetricSpace source;
    std::variant<UltraTree, StarTree> target;
    std::vector<std::vector<NodeId>> fibers;
    EmbeddingParams params;

    bool is_ultra() const { return std::holds_alternative<UltraTree>(target); }
    bool is_star() const { return std::holds_alternative<StarTree>(target); }
    const UltraTree& ultra() const { return std::get<UltraTree>(target); }
    const StarTree& star() const { return std::get<StarTree>(target); }

    // Target distance between two mapped nodes.
    double distance(NodeId a, NodeId b) const;
    int point_of(NodeId u) const;
    // Mapped target nodes (ultra leaves / star path nodes) in increasing id order.
    std::vector<NodeId> mapped_nodes() const;
    int target_size() const;
};

// A source path: any finite sequence of point ids, repeats allowed.
using PointPath = std::vector<int>;

double path_length(const MetricSpace& m, const PointPath& p);

// Representatives in the target, one per path position.
struct RepPath {
    std::vector<NodeId> seq;
    double length = 0.0;
};

double rep_length(const MultiEmbedding& me, const std::vector<NodeId>& seq);
// Throws InputError unless seq[i] represents p[i] for every i.
void check_representatives(const MultiEmbedding& me, const PointPath& p, const RepPath& r);

MultiEmbedding make_embedding(MetricSpace source, UltraTree tree, EmbeddingParams params);
MultiEmbedding make_embedding(MetricSpace source, StarTree tree, EmbeddingParams params);

// Mapped node pairs whose target distance is below their source distance
// (exhaustive; at most `limit` pairs are returned).
std::vector<std::pair<NodeId, NodeId>> contracted_pairs(const MultiEmbedding& me, std::size_t limit = 100);

// Dense metric over the mapped target nodes, ordered as mapped_nodes().
MetricSpace target_metric(const MultiEmbedding& me);

// max(1, 8 t log2 min{n, aspect}), the path-distortion bound of the shell construction.
double alpha_bound(int n, double aspect_ratio, int t);
// Star targets: 2 + delta/s. Ultrametric targets without a recorded t: 0.
double alpha_bound(const MultiEmbedding& me);

}  // namespace pathembed
