#include "pathembed/prob.hpp"

#include <cmath>
#include <numeric>
#include <thread>

#include "pathembed/errors.hpp"
#include "pathembed/rng.hpp"

namespace pathembed {

namespace {

struct Partitioner {
    const MetricSpace& m;
    std::vector<int> order;
    double scale = 0.75;
    double diameter = 0.0;
    UltraTree tree;

    double cluster_diameter(const std::vector<int>& c) const {
        double d = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = i + 1; j < c.size(); ++j) d = std::max(d, m(c[i], c[j]));
        }
        return d;
    }

    std::vector<std::vector<int>> cut(const std::vector<int>& c, int level) const {
        const double r = scale * diameter / std::ldexp(1.0, level + 1);
        std::vector<std::vector<int>> parts;
        std::vector<bool> taken(c.size(), false);
        std::size_t left = c.size();
        for (int centre : order) {
            if (left == 0) break;
            std::vector<int> part;
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (!taken[i] && m(centre, c[i]) < r) {
                    taken[i] = true;
                    part.push_back(c[i]);
                }
            }
            if (!part.empty()) {
                left -= part.size();
                parts.push_back(std::move(part));
            }
        }
        // Radius below every centre's reach: points stay alone.
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!taken[i]) parts.push_back({c[i]});
        }
        return parts;
    }

    void build(const std::vector<int>& c, int level, NodeId parent) {
        if (c.size() == 1) {
            tree.add_node(0.0, parent, c[0]);
            return;
        }
        auto parts = cut(c, level);
        while (parts.size() == 1) {
            if (level > 4000) throw InputError("sample_tree_embedding: distinct points at distance 0");
            parts = cut(c, ++level);
        }
        const NodeId id = tree.add_node(cluster_diameter(c), parent);
        for (const auto& part : parts) build(part, level + 1, id);
    }
};

}  // namespace

UltraTree sample_tree_embedding(const MetricSpace& m, std::uint64_t seed) {
    if (m.size() < 1) throw InputError("sample_tree_embedding: empty metric");
    Rng rng(seed);
    Partitioner p{m, std::vector<int>(m.size()), 0.5 + 0.5 * rng.uniform01(), m.diameter(), UltraTree(1.0, m.size())};
    std::iota(p.order.begin(), p.order.end(), 0);
    rng.shuffle(p.order);
    std::vector<int> all(m.size());
    std::iota(all.begin(), all.end(), 0);
    p.build(all, 0, kNoNode);
    return std::move(p.tree);
}

EmbeddingSample sample_embeddings(const MetricSpace& m, int count, std::uint64_t seed, int jobs) {
    if (count < 1) throw ParameterError("sample_embeddings: count must be >= 1");
    if (jobs < 1) throw ParameterError("sample_embeddings: jobs must be >= 1");
    EmbeddingSample s;
    for (int i = 0; i < count; ++i) s.seeds.push_back(Rng::derived(seed, static_cast<std::uint64_t>(i)).next());
    s.trees.resize(count);
    auto work = [&](int first) {
        for (int i = first; i < count; i += jobs) s.trees[i] = sample_tree_embedding(m, s.seeds[i]);
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
        for (auto& th : pool) th.join();
    }
    return s;
}

MultiEmbedding union_under_root(const MetricSpace& m, const EmbeddingSample& sample) {
    if (sample.trees.empty()) throw InputError("union_under_root: no trees");
    if (m.size() == 1 && sample.trees.size() > 1) {
        throw InputError("union_under_root: a one-point space admits no label separating its copies");
    }
    if (m.size() == 1) {
        EmbeddingParams params;
        params.kind = EmbeddingKind::prob;
        return make_embedding(m, sample.trees.front(), params);
    }
    double label = m.diameter();
    for (const auto& t : sample.trees) {
        if (t.source_n() != m.size() || t.empty()) throw InputError("union_under_root: trees over different sources");
        label = std::max(label, t.label(t.root()));
    }
    UltraTree out(1.0, m.size());
    const NodeId root = out.add_node(label, kNoNode);
    for (const auto& t : sample.trees) {
        std::vector<std::pair<NodeId, NodeId>> stack{{t.root(), root}};
        while (!stack.empty()) {
            const auto [u, parent] = stack.back();
            stack.pop_back();
            const NodeId id = out.add_node(t.label(u), parent, t.is_leaf(u) ? t.point(u) : -1);
            const auto& ch = t.children(u);
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({*it, id});
        }
    }
    EmbeddingParams params;
    params.kind = EmbeddingKind::prob;
    params.criterion = Criterion::none;
    return make_embedding(m, std::move(out), params);
}

}  // namespace pathembed
