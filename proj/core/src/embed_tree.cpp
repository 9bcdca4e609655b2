#include "pathembed/embed_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathembed/errors.hpp"
#include "pathembed/rng.hpp"

namespace pathembed {

StarTree::StarTree(double delta, int s, std::vector<std::vector<int>> paths, int source_n)
    : delta_(delta), s_(s), source_n_(source_n), paths_(std::move(paths)) {
    path_of_.push_back(-1);
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        if (paths_[i].empty()) {
            throw InputError("star tree: path " + std::to_string(i) + " is empty");
        }
        offset_.push_back(static_cast<int>(path_of_.size()));
        for (int x : paths_[i]) {
            if (x < 0 || x >= source_n_) {
                throw InputError("star tree: path node maps to unknown point " + std::to_string(x));
            }
            path_of_.push_back(static_cast<int>(i));
        }
    }
}

int StarTree::point(NodeId u) const {
    if (u <= 0 || u >= node_count()) {
        throw LookupError("star tree: node " + std::to_string(u) + " has no point");
    }
    return paths_[path_of_[u]][u - offset_[path_of_[u]]];
}

double StarTree::depth_from_root(NodeId u) const {
    if (u < 0 || u >= node_count()) throw LookupError("star tree: unknown node");
    return u == 0 ? 0.0 : delta_ / 2.0 + position_of(u);
}

double StarTree::distance(NodeId a, NodeId b) const {
    if (a < 0 || b < 0 || a >= node_count() || b >= node_count()) {
        throw LookupError("star tree: unknown node");
    }
    if (a == b) return 0.0;
    if (a != 0 && b != 0 && path_of_[a] == path_of_[b]) {
        return std::abs(a - b);
    }
    return depth_from_root(a) + depth_from_root(b);
}

std::vector<std::vector<NodeId>> StarTree::fibers() const {
    std::vector<std::vector<NodeId>> out(source_n_);
    for (NodeId u = 1; u < node_count(); ++u) {
        out[point(u)].push_back(u);
    }
    return out;
}

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > kSat - b ? kSat : a + b;
}

// cnt[k][u]: walks of exactly k edges starting at u.
std::vector<std::vector<std::uint64_t>> walk_table(const std::vector<std::vector<int>>& adj, int s) {
    const std::size_t n = adj.size();
    std::vector<std::vector<std::uint64_t>> cnt(s + 1, std::vector<std::uint64_t>(n, 0));
    std::fill(cnt[0].begin(), cnt[0].end(), 1);
    for (int k = 1; k <= s; ++k) {
        for (std::size_t u = 0; u < n; ++u) {
            for (int v : adj[u]) cnt[k][u] = sat_add(cnt[k][u], cnt[k - 1][v]);
        }
    }
    return cnt;
}

void check_unweighted(const Graph& g) {
    for (const Edge& e : g.edges) {
        if (e.w != 1.0) throw InputError("build_path_star: graph must be unweighted");
    }
}

}  // namespace

std::uint64_t walk_count(const Graph& g, int s) {
    if (s < 0) throw ParameterError("walk_count: s must be >= 0");
    const auto adj = g.adjacency();
    const auto cnt = walk_table(adj, s);
    std::uint64_t total = 0;
    for (auto c : cnt[s]) total = sat_add(total, c);
    return total;
}

int hypercube_s(int h) {
    if (h < 1) throw ParameterError("hypercube_s: h must be >= 1");
    if (h <= 2) return 1;
    return std::max(1, static_cast<int>(std::ceil(h / std::log2(static_cast<double>(h)))));
}

MultiEmbedding build_path_star(const Graph& g, int s, const StarBuildOptions& options) {
    if (s < 1) throw ParameterError("build_path_star: s must be >= 1");
    check_unweighted(g);
    MetricSpace source = from_graph(g);
    const auto adj = g.adjacency();
    std::vector<std::vector<int>> paths;
    if (g.n == 1) {
        paths.push_back({0});
    } else {
        const auto cnt = walk_table(adj, s);
        std::uint64_t total = 0;
        for (auto c : cnt[s]) total = sat_add(total, c);
        const double nodes = 1.0 + static_cast<double>(total) * (s + 1);
        if (total == kSat || nodes > static_cast<double>(options.node_budget)) {
            throw BudgetError("build_path_star: " + std::to_string(total) + " walks of length " + std::to_string(s) +
                              " exceed the node budget of " + std::to_string(options.node_budget));
        }
        paths.reserve(static_cast<std::size_t>(total));
        // Depth-first lexicographic enumeration.
        std::vector<int> walk;
        std::vector<std::size_t> next;
        for (int start = 0; start < g.n; ++start) {
            walk.assign(1, start);
            next.assign(1, 0);
            while (!walk.empty()) {
                if (static_cast<int>(walk.size()) == s + 1) {
                    paths.push_back(walk);
                    walk.pop_back();
                    next.pop_back();
                    continue;
                }
                const auto& nb = adj[walk.back()];
                std::size_t& i = next.back();
                if (i < nb.size()) {
                    walk.push_back(nb[i++]);
                    next.push_back(0);
                } else {
                    walk.pop_back();
                    next.pop_back();
                }
            }
        }
    }
    const double delta = source.diameter();
    StarTree tree(delta, s, std::move(paths), g.n);
    EmbeddingParams params;
    params.kind = EmbeddingKind::star;
    return make_embedding(std::move(source), std::move(tree), params);
}

MultiEmbedding build_path_star(const MetricSpace& m, int s, const StarBuildOptions& options) {
    const Graph g = unit_distance_graph(m);
    if (g.n >= 2 && !g.connected()) {
        throw InputError("build_path_star: unit-distance graph of the metric is disconnected");
    }
    if (!(from_graph(g) == m)) {
        throw InputError("build_path_star: metric is not the shortest-path metric of an unweighted graph");
    }
    MultiEmbedding me = build_path_star(g, s, options);
    me.source = m;
    return me;
}

namespace {

struct WalkIndex {
    std::vector<std::vector<int>> adj;
    std::vector<std::vector<std::uint64_t>> cnt;
    std::vector<std::uint64_t> offset;
    int s = 0;

    WalkIndex(const MetricSpace& m, int s_) : adj(unit_distance_graph(m).adjacency()), s(s_) {
        cnt = walk_table(adj, s);
        offset.assign(adj.size() + 1, 0);
        for (std::size_t u = 0; u < adj.size(); ++u) offset[u + 1] = offset[u] + cnt[s][u];
    }

    // Extends `w` to s edges by repeatedly taking the smallest neighbour.
    void complete(std::vector<int>& w) const {
        while (static_cast<int>(w.size()) < s + 1) w.push_back(adj[w.back()].front());
    }

    std::uint64_t index(const std::vector<int>& w) const {
        std::uint64_t id = offset[w[0]];
        for (int j = 0; j < s; ++j) {
            for (int u : adj[w[j]]) {
                if (u >= w[j + 1]) break;
                id += cnt[s - j - 1][u];
            }
        }
        return id;
    }
};

}  // namespace

StarRealization realize_in_star(const MultiEmbedding& me, const PointPath& p) {
    if (!me.is_star()) throw InputError("realize_in_star: target is not a star of paths");
    if (p.empty()) throw InputError("realize_in_star: empty path");
    const StarTree& tree = me.star();
    const MetricSpace& m = me.source;
    for (int x : p) {
        if (x < 0 || x >= m.size()) throw InputError("realize_in_star: unknown point " + std::to_string(x));
    }
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (m(p[i - 1], p[i]) != 1.0) {
            throw InputError("realize_in_star: consecutive points " + std::to_string(i - 1) + "," +
                             std::to_string(i) + " are not adjacent");
        }
    }
    const int s = tree.s();
    const int l = static_cast<int>(p.size()) - 1;
    StarRealization out;
    out.source_length = l;
    if (m.size() == 1) {
        out.path.seq.assign(p.size(), tree.node(0, 0));
        out.chunks = 1;
        return out;
    }
    const WalkIndex index(m, s);
    auto locate = [&](std::vector<int> w) {
        index.complete(w);
        const std::uint64_t id = index.index(w);
        if (id >= static_cast<std::uint64_t>(tree.path_count()) || tree.paths()[id] != w) {
            throw InternalConsistencyError("realize_in_star: star does not enumerate the expected walk");
        }
        return static_cast<int>(id);
    };
    // Chunk 0 covers p[0..s]; chunk c covers p[cs+1..(c+1)s] at positions 1..s
    // of a walk starting at p[cs].
    {
        std::vector<int> w(p.begin(), p.begin() + std::min(l, s) + 1);
        const int path = locate(w);
        for (int pos = 0; pos <= std::min(l, s); ++pos) out.path.seq.push_back(tree.node(path, pos));
    }
    out.chunks = 1;
    for (int start = s; start < l; start += s) {
        const int end = std::min(l, start + s);
        std::vector<int> w(p.begin() + start, p.begin() + end + 1);
        const int path = locate(w);
        for (int pos = 1; pos <= end - start; ++pos) out.path.seq.push_back(tree.node(path, pos));
        ++out.chunks;
    }
    out.path.length = rep_length(me, out.path.seq);
    out.chunk_bound = 2.0 * l + (out.chunks - 1) * tree.delta();
    out.ratio_bound = (2.0 + tree.delta() / s) * l;
    return out;
}

StarAudit audit_star(const MultiEmbedding& me, std::size_t samples, std::uint64_t seed) {
    if (!me.is_star()) throw InputError("audit_star: target is not a star of paths");
    const StarTree& tree = me.star();
    const MetricSpace& m = me.source;
    const int n = m.size();
    const int s = tree.s();
    StarAudit audit;
    audit.node_count = tree.node_count();
    audit.path_count = tree.paths().size();
    const Graph g = unit_distance_graph(m);
    const double d = g.max_degree();
    audit.walk_bound = n * std::pow(d, s);
    audit.size_bound = 1.0 + n * (s + 1) * std::pow(d, s);
    auto report = [&](std::string v) {
        if (audit.violations.size() < 200) audit.violations.push_back(std::move(v));
    };
    if (n >= 2 && audit.node_count > audit.size_bound) {
        report("size: " + std::to_string(audit.node_count) + " nodes exceed 1 + n(s+1)d^s");
    }
    for (std::size_t i = 0; i < tree.paths().size(); ++i) {
        const auto& w = tree.paths()[i];
        if (static_cast<int>(w.size()) > s + 1) report("path " + std::to_string(i) + " has more than s edges");
        for (std::size_t j = 1; j < w.size(); ++j) {
            if (m(w[j - 1], w[j]) != 1.0) {
                report("path " + std::to_string(i) + " is not a walk at position " + std::to_string(j));
                break;
            }
        }
    }
    for (int x = 0; x < n; ++x) {
        if (me.fibers.at(x).empty()) report("point " + std::to_string(x) + " has no representative");
    }
    auto check = [&](NodeId a, NodeId b) {
        ++audit.pairs_checked;
        if (tree.distance(a, b) < m(tree.point(a), tree.point(b))) {
            report("non_contractive: nodes " + std::to_string(a) + "," + std::to_string(b));
        }
    };
    const int nodes = audit.node_count;
    if (nodes - 1 <= 2000) {
        audit.exhaustive_pairs = true;
        for (NodeId a = 1; a < nodes; ++a) {
            for (NodeId b = a + 1; b < nodes; ++b) check(a, b);
        }
    } else {
        Rng rng(seed);
        for (std::size_t i = 0; i < samples; ++i) {
            const auto a = static_cast<NodeId>(1 + rng.index(nodes - 1));
            const auto b = static_cast<NodeId>(1 + rng.index(nodes - 1));
            check(a, b);
        }
    }
    return audit;
}

}  // namespace pathembed
