#include "pathembed/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "pathembed/errors.hpp"

namespace pathembed {

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::size: return "size";
        case Criterion::diameter: return "diameter";
        case Criterion::none: return "none";
    }
    return "none";
}

Criterion parse_criterion(const std::string& name) {
    if (name == "size") return Criterion::size;
    if (name == "diameter") return Criterion::diameter;
    if (name == "none") return Criterion::none;
    throw InputError("unknown criterion '" + name + "'");
}

std::string to_string(EmbeddingKind k) {
    switch (k) {
        case EmbeddingKind::ultra: return "ultra";
        case EmbeddingKind::star: return "star";
        case EmbeddingKind::prob: return "prob";
    }
    return "ultra";
}

EmbeddingKind parse_embedding_kind(const std::string& name) {
    if (name == "ultra") return EmbeddingKind::ultra;
    if (name == "star") return EmbeddingKind::star;
    if (name == "prob") return EmbeddingKind::prob;
    throw InputError("unknown embedding kind '" + name + "'");
}

double MultiEmbedding::distance(NodeId a, NodeId b) const {
    if (is_ultra()) {
        return ultra().distance(a, b);
    }
    return star().distance(a, b);
}

int MultiEmbedding::point_of(NodeId u) const {
    if (is_ultra()) {
        const UltraTree& t = ultra();
        if (u < 0 || u >= t.size() || !t.is_leaf(u)) {
            throw LookupError("embedding: node " + std::to_string(u) + " is not a leaf");
        }
        return t.point(u);
    }
    const StarTree& t = star();
    if (u <= 0 || u >= t.node_count()) {
        throw LookupError("embedding: node " + std::to_string(u) + " is not a path node");
    }
    return t.point(u);
}

std::vector<NodeId> MultiEmbedding::mapped_nodes() const {
    if (is_ultra()) {
        return ultra().leaves();
    }
    std::vector<NodeId> out(static_cast<std::size_t>(star().node_count() - 1));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<NodeId>(i + 1);
    }
    return out;
}

int MultiEmbedding::target_size() const {
    return is_ultra() ? ultra().leaf_count() : star().node_count() - 1;
}

namespace {

void check_fibers(const MetricSpace& source, const std::vector<std::vector<NodeId>>& fibers) {
    if (static_cast<int>(fibers.size()) != source.size()) {
        throw InputError("embedding: target maps onto a different number of points than the source");
    }
    for (std::size_t x = 0; x < fibers.size(); ++x) {
        if (fibers[x].empty()) {
            throw InputError("embedding: point " + std::to_string(x) + " has no representative");
        }
    }
}

}  // namespace

MultiEmbedding make_embedding(MetricSpace source, UltraTree tree, EmbeddingParams params) {
    if (tree.source_n() != source.size()) {
        throw InputError("embedding: tree source_n does not match the source metric");
    }
    auto fibers = tree.fibers();
    check_fibers(source, fibers);
    params.source_diameter = source.diameter();
    params.source_aspect_ratio = source.aspect_ratio();
    return MultiEmbedding{std::move(source), std::move(tree), std::move(fibers), params};
}

MultiEmbedding make_embedding(MetricSpace source, StarTree tree, EmbeddingParams params) {
    if (tree.source_n() != source.size()) {
        throw InputError("embedding: star source_n does not match the source metric");
    }
    auto fibers = tree.fibers();
    check_fibers(source, fibers);
    params.source_diameter = source.diameter();
    params.source_aspect_ratio = source.aspect_ratio();
    params.s = tree.s();
    return MultiEmbedding{std::move(source), std::move(tree), std::move(fibers), params};
}

MetricSpace target_metric(const MultiEmbedding& me) {
    const auto nodes = me.mapped_nodes();
    const int n = static_cast<int>(nodes.size());
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = me.distance(nodes[i], nodes[j]);
            d[static_cast<std::size_t>(i) * n + j] = v;
            d[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return MetricSpace(n, std::move(d));
}

std::vector<std::pair<NodeId, NodeId>> contracted_pairs(const MultiEmbedding& me, std::size_t limit) {
    std::vector<std::pair<NodeId, NodeId>> out;
    const auto nodes = me.mapped_nodes();
    for (std::size_t i = 0; i < nodes.size() && out.size() < limit; ++i) {
        const int x = me.point_of(nodes[i]);
        for (std::size_t j = i + 1; j < nodes.size() && out.size() < limit; ++j) {
            if (!leq_tol(me.source(x, me.point_of(nodes[j])), me.distance(nodes[i], nodes[j]))) {
                out.emplace_back(nodes[i], nodes[j]);
            }
        }
    }
    return out;
}

double path_length(const MetricSpace& m, const PointPath& p) {
    double total = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        total += m(p[i - 1], p[i]);
    }
    return total;
}

double rep_length(const MultiEmbedding& me, const std::vector<NodeId>& seq) {
    double total = 0.0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        total += me.distance(seq[i - 1], seq[i]);
    }
    return total;
}

void check_representatives(const MultiEmbedding& me, const PointPath& p, const RepPath& r) {
    if (r.seq.size() != p.size()) {
        throw InputError("representative path has the wrong length");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (me.point_of(r.seq[i]) != p[i]) {
            throw InputError("representative " + std::to_string(i) + " maps to the wrong point");
        }
    }
}

double alpha_bound(int n, double aspect_ratio, int t) {
    // No non-contractive embedding does better than 1; the formula drops
    // below that only for aspect ratios under 2^(1/8t).
    const double m = std::min(static_cast<double>(n), aspect_ratio);
    if (m <= 1.0) {
        return 1.0;
    }
    return std::max(1.0, 8.0 * t * std::log2(m));
}

double alpha_bound(const MultiEmbedding& me) {
    if (me.is_star()) {
        return 2.0 + me.star().delta() / me.star().s();
    }
    if (me.params.t <= 0) {
        return 0.0;
    }
    return alpha_bound(me.source.size(), me.params.source_aspect_ratio, me.params.t);
}

}  // namespace pathembed
