#include "pathembed/gst.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

#include "pathembed/errors.hpp"

namespace pathembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

std::uint64_t pair_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

std::unordered_map<std::uint64_t, double> edge_weights(const Graph& g) {
    std::unordered_map<std::uint64_t, double> w;
    for (const Edge& e : g.edges) {
        auto [it, inserted] = w.emplace(pair_key(e.u, e.v), e.w);
        if (!inserted) it->second = std::min(it->second, e.w);
    }
    return w;
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Kruskal over candidate edges with weights; ties by (weight, u, v).
SteinerSolution kruskal(std::vector<int> vertices, std::vector<std::tuple<double, int, int>> edges, int n) {
    std::sort(edges.begin(), edges.end());
    DisjointSets ds(n);
    SteinerSolution out;
    out.vertices = sorted_unique(std::move(vertices));
    for (const auto& [w, u, v] : edges) {
        if (ds.unite(u, v)) {
            out.edges.emplace_back(u, v);
            out.cost += w;
        }
    }
    return out;
}

}  // namespace

GstInstance make_gst_instance(MetricSpace metric, std::vector<std::vector<int>> groups) {
    GstInstance inst{std::move(metric), std::nullopt, std::move(groups)};
    validate_instance(inst);
    return inst;
}

GstInstance make_gst_instance(Graph graph, std::vector<std::vector<int>> groups) {
    MetricSpace m = from_graph(graph);
    GstInstance inst{std::move(m), std::move(graph), std::move(groups)};
    validate_instance(inst);
    return inst;
}

void validate_instance(const GstInstance& inst) {
    if (inst.groups.empty()) throw InputError("gst: instance has no groups");
    for (std::size_t i = 0; i < inst.groups.size(); ++i) {
        if (inst.groups[i].empty()) throw InputError("gst: group " + std::to_string(i) + " is empty");
        for (int v : inst.groups[i]) {
            if (v < 0 || v >= inst.size()) {
                throw InputError("gst: group " + std::to_string(i) + " has unknown vertex " + std::to_string(v));
            }
        }
    }
    if (inst.graph && inst.graph->n != inst.size()) {
        throw InputError("gst: graph and metric sizes differ");
    }
}

double edge_cost(const GstInstance& inst, int u, int v) {
    if (!inst.graph) return inst.metric(u, v);
    double best = kInf;
    for (const Edge& e : inst.graph->edges) {
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) best = std::min(best, e.w);
    }
    return best;
}

std::string check_solution(const GstInstance& inst, const SteinerSolution& sol) {
    const int n = inst.size();
    if (sol.vertices.empty()) return "solution has no vertices";
    for (std::size_t i = 0; i < sol.vertices.size(); ++i) {
        const int v = sol.vertices[i];
        if (v < 0 || v >= n) return "unknown vertex " + std::to_string(v);
        if (i > 0 && sol.vertices[i - 1] >= v) return "vertices are not sorted and distinct";
    }
    if (sol.edges.size() + 1 != sol.vertices.size()) return "edge count is not vertex count - 1";
    std::unordered_map<std::uint64_t, double> weights;
    if (inst.graph) weights = edge_weights(*inst.graph);
    DisjointSets ds(n);
    double cost = 0.0;
    for (const auto& [u, v] : sol.edges) {
        if (!std::binary_search(sol.vertices.begin(), sol.vertices.end(), u) ||
            !std::binary_search(sol.vertices.begin(), sol.vertices.end(), v)) {
            return "edge endpoint outside the vertex set";
        }
        if (!ds.unite(u, v)) return "edges contain a cycle";
        if (inst.graph) {
            auto it = weights.find(pair_key(u, v));
            if (it == weights.end()) return "edge " + std::to_string(u) + "-" + std::to_string(v) + " is not in the graph";
            cost += it->second;
        } else {
            cost += inst.metric(u, v);
        }
    }
    for (std::size_t i = 0; i < inst.groups.size(); ++i) {
        bool hit = false;
        for (int v : inst.groups[i]) hit = hit || std::binary_search(sol.vertices.begin(), sol.vertices.end(), v);
        if (!hit) return "group " + std::to_string(i) + " is not covered";
    }
    if (!leq_tol(cost, sol.cost) || !leq_tol(sol.cost, cost)) return "stated cost differs from the edge total";
    return "";
}

SteinerSolution metric_mst(const GstInstance& inst, std::vector<int> vertices) {
    vertices = sorted_unique(std::move(vertices));
    SteinerSolution out;
    out.vertices = vertices;
    const std::size_t k = vertices.size();
    if (k <= 1) return out;
    std::vector<double> key(k, kInf);
    std::vector<int> from(k, -1);
    std::vector<bool> done(k, false);
    key[0] = 0.0;
    for (std::size_t round = 0; round < k; ++round) {
        std::size_t best = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (!done[i] && (best == k || key[i] < key[best])) best = i;
        }
        done[best] = true;
        if (from[best] >= 0) {
            out.edges.emplace_back(vertices[from[best]], vertices[best]);
            out.cost += key[best];
        }
        for (std::size_t i = 0; i < k; ++i) {
            const double d = inst.metric(vertices[best], vertices[i]);
            if (!done[i] && d < key[i]) {
                key[i] = d;
                from[i] = static_cast<int>(best);
            }
        }
    }
    return out;
}

SteinerSolution expand_to_graph(const GstInstance& inst, const SteinerSolution& sol) {
    if (!inst.graph) return sol;
    const Graph& g = *inst.graph;
    std::vector<std::vector<std::pair<int, double>>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::set<std::tuple<double, int, int>> used;
    std::vector<int> vertices = sol.vertices;
    std::map<int, std::vector<int>> pred_cache;
    auto preds = [&](int src) -> const std::vector<int>& {
        auto it = pred_cache.find(src);
        if (it != pred_cache.end()) return it->second;
        std::vector<double> dist(g.n, kInf);
        std::vector<int> pred(g.n, -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[src] = 0.0;
        pq.push({0.0, src});
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            for (const auto& [v, w] : adj[u]) {
                const double nd = d + w;
                if (nd < dist[v] || (nd == dist[v] && u < pred[v])) {
                    const bool push = nd < dist[v];
                    dist[v] = nd;
                    pred[v] = u;
                    if (push) pq.push({nd, v});
                }
            }
        }
        return pred_cache.emplace(src, std::move(pred)).first->second;
    };
    auto weights = edge_weights(g);
    for (const auto& [a, b] : sol.edges) {
        const auto& pred = preds(a);
        for (int v = b; v != a; v = pred[v]) {
            const int u = pred[v];
            if (u < 0) throw InfiniteDistanceError("gst: solution edge joins disconnected vertices");
            vertices.push_back(u);
            used.insert({weights.at(pair_key(u, v)), std::min(u, v), std::max(u, v)});
        }
    }
    return kruskal(std::move(vertices), {used.begin(), used.end()}, g.n);
}

ReducedGst reduce_gst(const MultiEmbedding& me, const GstInstance& inst) {
    validate_instance(inst);
    if (!(inst.metric == me.source)) throw InputError("reduce_gst: instance space is not the embedding source");
    ReducedGst out;
    Graph g;
    g.unweighted = false;
    std::vector<int> node_vertex;
    if (me.is_ultra()) {
        const UltraTree& t = me.ultra();
        if (!validate_hst(t, 1.0).ok()) throw InputError("reduce_gst: target is not a valid ultrametric tree");
        node_vertex.assign(t.size(), -1);
        // Nodes in increasing id order; parents precede children.
        std::vector<NodeId> order(t.size());
        std::iota(order.begin(), order.end(), 0);
        for (NodeId u : order) {
            const NodeId p = t.parent(u);
            if (p != kNoNode && !t.is_leaf(u) && t.label(u) == t.label(p)) {
                node_vertex[u] = node_vertex[p];
                continue;
            }
            node_vertex[u] = static_cast<int>(out.vertex_node.size());
            out.vertex_node.push_back(u);
            out.vertex_point.push_back(t.is_leaf(u) ? t.point(u) : -1);
            if (p != kNoNode) {
                g.edges.push_back({node_vertex[p], node_vertex[u], (t.label(p) - t.label(u)) / 2.0});
            }
        }
    } else {
        const StarTree& t = me.star();
        node_vertex.resize(t.node_count());
        for (NodeId u = 0; u < t.node_count(); ++u) {
            node_vertex[u] = u;
            out.vertex_node.push_back(u);
            out.vertex_point.push_back(u == 0 ? -1 : t.point(u));
        }
        for (int i = 0; i < t.path_count(); ++i) {
            g.edges.push_back({0, t.node(i, 0), t.delta() / 2.0});
            for (std::size_t j = 1; j < t.paths()[i].size(); ++j) {
                g.edges.push_back({t.node(i, static_cast<int>(j) - 1), t.node(i, static_cast<int>(j)), 1.0});
            }
        }
    }
    g.n = static_cast<int>(out.vertex_node.size());
    std::vector<std::vector<int>> groups;
    for (const auto& grp : inst.groups) {
        std::vector<int> tg;
        for (int x : grp) {
            for (NodeId u : me.fibers[x]) tg.push_back(node_vertex[u]);
        }
        groups.push_back(sorted_unique(std::move(tg)));
    }
    out.instance = make_gst_instance(std::move(g), std::move(groups));
    return out;
}

namespace {

struct TreeDp {
    const GstInstance& inst;
    int k;
    std::size_t full;
    std::vector<std::vector<std::pair<int, double>>> children;
    std::vector<std::uint64_t> mask;
    std::vector<std::vector<double>> dp;

    std::vector<double> init(int v) const {
        std::vector<double> layer(full + 1, kInf);
        for (std::size_t s = 0; s <= full; ++s) {
            if ((s & ~mask[v]) == 0) layer[s] = 0.0;
        }
        return layer;
    }

    std::vector<double> merge(const std::vector<double>& cur, int c, double w) const {
        std::vector<double> next = cur;
        const auto& dc = dp[c];
        for (std::size_t s = 1; s <= full; ++s) {
            for (std::size_t t = s; t > 0; t = (t - 1) & s) {
                if (dc[t] == kInf || cur[s ^ t] == kInf) continue;
                const double v = cur[s ^ t] + dc[t] + w;
                if (v < next[s]) next[s] = v;
            }
        }
        return next;
    }

    std::vector<std::vector<double>> layers(int v) const {
        std::vector<std::vector<double>> out{init(v)};
        for (const auto& [c, w] : children[v]) out.push_back(merge(out.back(), c, w));
        return out;
    }

    void reconstruct(int v, std::size_t s, SteinerSolution& sol) const {
        sol.vertices.push_back(v);
        const auto ls = layers(v);
        for (std::size_t j = children[v].size(); j > 0; --j) {
            if (ls[j][s] == ls[j - 1][s]) continue;
            const auto [c, w] = children[v][j - 1];
            bool found = false;
            for (std::size_t t = s; t > 0; t = (t - 1) & s) {
                if (ls[j - 1][s ^ t] + dp[c][t] + w == ls[j][s]) {
                    sol.edges.emplace_back(v, c);
                    sol.cost += w;
                    reconstruct(c, t, sol);
                    s ^= t;
                    found = true;
                    break;
                }
            }
            if (!found) throw InternalConsistencyError("solve_tree_exact: reconstruction lost the optimum");
        }
        if ((s & ~mask[v]) != 0) throw InternalConsistencyError("solve_tree_exact: uncovered groups at a leaf");
    }
};

}  // namespace

SteinerSolution solve_tree_exact(const GstInstance& inst, int budget) {
    validate_instance(inst);
    if (!inst.graph) throw InputError("solve_tree_exact: instance has no tree graph");
    const Graph& g = *inst.graph;
    const int n = g.n;
    const int k = inst.group_count();
    if (k > budget) {
        throw BudgetError("solve_tree_exact: " + std::to_string(k) + " groups exceed the budget of " +
                          std::to_string(budget));
    }
    if (k > 30) throw BudgetError("solve_tree_exact: too many groups for the subset DP");
    if (static_cast<int>(g.edges.size()) != n - 1 || !g.connected()) {
        throw InputError("solve_tree_exact: graph is not a tree");
    }
    const double cells = static_cast<double>(n) * std::ldexp(1.0, k);
    if (cells > 6e7) throw BudgetError("solve_tree_exact: DP table too large");
    TreeDp t{inst, k, (std::size_t{1} << k) - 1, std::vector<std::vector<std::pair<int, double>>>(n),
             std::vector<std::uint64_t>(n, 0), std::vector<std::vector<double>>(n)};
    for (int i = 0; i < k; ++i) {
        for (int v : inst.groups[i]) t.mask[v] |= std::uint64_t{1} << i;
    }
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<int> order{0};
    std::vector<int> parent(n, -2);
    parent[0] = -1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int u = order[i];
        for (const auto& [v, w] : adj[u]) {
            if (parent[v] != -2) continue;
            parent[v] = u;
            t.children[u].push_back({v, w});
            order.push_back(v);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        t.dp[*it] = t.layers(*it).back();
    }
    int best = -1;
    for (int v = 0; v < n; ++v) {
        if (best < 0 || t.dp[v][t.full] < t.dp[best][t.full]) best = v;
    }
    if (t.dp[best][t.full] == kInf) throw InternalConsistencyError("solve_tree_exact: no feasible tree");
    SteinerSolution sol;
    t.reconstruct(best, t.full, sol);
    std::sort(sol.vertices.begin(), sol.vertices.end());
    return sol;
}

SteinerSolution project_solution(const MultiEmbedding& me, const ReducedGst& reduced, const SteinerSolution& sol,
                                 const GstInstance& inst) {
    const std::string why = check_solution(reduced.instance, sol);
    if (!why.empty()) throw InputError("project_solution: infeasible target solution: " + why);
    std::vector<int> mapped;
    bool steiner = false;
    for (int v : sol.vertices) {
        if (reduced.vertex_point.at(v) >= 0) {
            mapped.push_back(v);
        } else {
            steiner = true;
        }
    }
    // Target tree over mapped vertices only.
    std::vector<std::pair<int, int>> target_edges;
    if (steiner) {
        const std::size_t k = mapped.size();
        std::vector<double> key(k, kInf);
        std::vector<int> from(k, -1);
        std::vector<bool> done(k, false);
        if (k > 0) key[0] = 0.0;
        for (std::size_t round = 0; round < k; ++round) {
            std::size_t best = k;
            for (std::size_t i = 0; i < k; ++i) {
                if (!done[i] && (best == k || key[i] < key[best])) best = i;
            }
            done[best] = true;
            if (from[best] >= 0) target_edges.emplace_back(mapped[from[best]], mapped[best]);
            for (std::size_t i = 0; i < k; ++i) {
                const double d = me.distance(reduced.vertex_node[mapped[best]], reduced.vertex_node[mapped[i]]);
                if (!done[i] && d < key[i]) {
                    key[i] = d;
                    from[i] = static_cast<int>(best);
                }
            }
        }
    } else {
        target_edges = sol.edges;
    }
    std::vector<int> points;
    std::vector<std::tuple<double, int, int>> image;
    for (int v : mapped) points.push_back(reduced.vertex_point[v]);
    for (const auto& [a, b] : target_edges) {
        const int x = reduced.vertex_point[a];
        const int y = reduced.vertex_point[b];
        if (x == y) continue;
        image.emplace_back(inst.metric(x, y), std::min(x, y), std::max(x, y));
    }
    SteinerSolution metric_tree = kruskal(std::move(points), std::move(image), inst.size());
    if (metric_tree.edges.size() + 1 != metric_tree.vertices.size()) {
        throw InternalConsistencyError("project_solution: image graph is disconnected");
    }
    return expand_to_graph(inst, metric_tree);
}

SteinerSolution dreyfus_wagner(const GstInstance& inst, std::vector<int> terminals) {
    terminals = sorted_unique(std::move(terminals));
    const int n = inst.size();
    const int q = static_cast<int>(terminals.size());
    if (q == 0) throw InputError("dreyfus_wagner: no terminals");
    if (q == 1) return expand_to_graph(inst, SteinerSolution{terminals, {}, 0.0});
    if (q > 20) throw BudgetError("dreyfus_wagner: too many terminals");
    const std::size_t full = (std::size_t{1} << q) - 1;
    const MetricSpace& m = inst.metric;
    std::vector<std::vector<double>> dp(full + 1, std::vector<double>(n, kInf));
    std::vector<std::vector<double>> join(full + 1, std::vector<double>(n, kInf));
    for (int i = 0; i < q; ++i) {
        for (int v = 0; v < n; ++v) dp[std::size_t{1} << i][v] = m(terminals[i], v);
    }
    for (std::size_t s = 1; s <= full; ++s) {
        if (std::popcount(s) < 2) continue;
        const std::size_t low = s & (~s + 1);
        for (int u = 0; u < n; ++u) {
            double best = kInf;
            // Subsets containing the lowest bit, proper.
            for (std::size_t a = (s - 1) & s; a > 0; a = (a - 1) & s) {
                if (!(a & low)) continue;
                best = std::min(best, dp[a][u] + dp[s ^ a][u]);
            }
            join[s][u] = best;
        }
        for (int v = 0; v < n; ++v) {
            double best = kInf;
            for (int u = 0; u < n; ++u) best = std::min(best, join[s][u] + m(u, v));
            dp[s][v] = best;
        }
    }
    std::vector<int> vertices = terminals;
    std::function<void(std::size_t, int)> collect = [&](std::size_t s, int v) {
        vertices.push_back(v);
        if (std::popcount(s) == 1) return;
        const std::size_t low = s & (~s + 1);
        for (int u = 0; u < n; ++u) {
            if (join[s][u] + m(u, v) != dp[s][v]) continue;
            vertices.push_back(u);
            for (std::size_t a = (s - 1) & s; a > 0; a = (a - 1) & s) {
                if (!(a & low)) continue;
                if (dp[a][u] + dp[s ^ a][u] == join[s][u]) {
                    collect(a, u);
                    collect(s ^ a, u);
                    return;
                }
            }
        }
        throw InternalConsistencyError("dreyfus_wagner: reconstruction lost the optimum");
    };
    collect(full, terminals[0]);
    return expand_to_graph(inst, metric_mst(inst, std::move(vertices)));
}

SteinerSolution exact_oracle(const GstInstance& inst, std::size_t budget) {
    validate_instance(inst);
    if (inst.size() > 20) throw BudgetError("exact_oracle: more than 20 vertices");
    double product = 1.0;
    for (const auto& g : inst.groups) product *= static_cast<double>(g.size());
    if (product > static_cast<double>(budget)) {
        throw BudgetError("exact_oracle: " + std::to_string(static_cast<long long>(product)) +
                          " representative choices exceed the budget of " + std::to_string(budget));
    }
    const std::size_t k = inst.groups.size();
    std::vector<std::size_t> pick(k, 0);
    std::set<std::vector<int>> seen;
    std::optional<SteinerSolution> best;
    while (true) {
        std::vector<int> terms;
        for (std::size_t i = 0; i < k; ++i) terms.push_back(inst.groups[i][pick[i]]);
        terms = sorted_unique(std::move(terms));
        if (seen.insert(terms).second) {
            SteinerSolution s = dreyfus_wagner(inst, terms);
            if (!best || s.cost < best->cost || (s.cost == best->cost && s.vertices < best->vertices)) {
                best = std::move(s);
            }
        }
        std::size_t i = 0;
        while (i < k && ++pick[i] == inst.groups[i].size()) pick[i++] = 0;
        if (i == k) break;
    }
    return *best;
}

MetricSpace star_shape_metric(const StarShape& shape, double delta) {
    int n = 0;
    for (const auto& p : shape.paths) n += static_cast<int>(p.size());
    std::vector<int> path_of(n, -1), pos(n, -1);
    for (std::size_t i = 0; i < shape.paths.size(); ++i) {
        for (std::size_t j = 0; j < shape.paths[i].size(); ++j) {
            const int v = shape.paths[i][j];
            if (v < 0 || v >= n || path_of[v] >= 0) throw InputError("star shape: vertex ids are not a permutation");
            path_of[v] = static_cast<int>(i);
            pos[v] = static_cast<int>(j);
        }
    }
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            d[static_cast<std::size_t>(a) * n + b] =
                path_of[a] == path_of[b] ? std::abs(pos[a] - pos[b]) : pos[a] + pos[b] + delta;
        }
    }
    return MetricSpace(n, std::move(d));
}

std::string check_star_shape(const MetricSpace& m, const StarShape& shape, int s, double delta) {
    const int n = m.size();
    std::vector<int> path_of(n, -1), pos(n, -1);
    for (std::size_t i = 0; i < shape.paths.size(); ++i) {
        if (shape.paths[i].empty()) return "path " + std::to_string(i) + " is empty";
        if (static_cast<int>(shape.paths[i].size()) > s + 1) return "path " + std::to_string(i) + " exceeds s edges";
        for (std::size_t j = 0; j < shape.paths[i].size(); ++j) {
            const int v = shape.paths[i][j];
            if (v < 0 || v >= n) return "unknown vertex " + std::to_string(v);
            if (path_of[v] >= 0) return "vertex " + std::to_string(v) + " lies on two paths";
            path_of[v] = static_cast<int>(i);
            pos[v] = static_cast<int>(j);
        }
    }
    for (int v = 0; v < n; ++v) {
        if (path_of[v] < 0) return "vertex " + std::to_string(v) + " lies on no path";
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double want = path_of[a] == path_of[b] ? std::abs(pos[a] - pos[b]) : pos[a] + pos[b] + delta;
            if (!leq_tol(m(a, b), want) || !leq_tol(want, m(a, b))) {
                return "distance " + std::to_string(a) + "-" + std::to_string(b) + " does not match the star shape";
            }
        }
    }
    return "";
}

double greedy_star_bound(int s, double delta, int k) {
    return (1.0 + 2.0 * s / delta) * (1.0 + std::log(static_cast<double>(k)));
}

GreedyStarResult greedy_star_solver(const GstInstance& inst, const StarShape& shape, int s, double delta) {
    validate_instance(inst);
    if (inst.graph) throw InputError("greedy_star_solver: instance must be metric");
    if (s < 1) throw ParameterError("greedy_star_solver: s must be >= 1");
    if (!(delta > 0.0)) throw ParameterError("greedy_star_solver: delta must be positive");
    const std::string why = check_star_shape(inst.metric, shape, s, delta);
    if (!why.empty()) throw InputError("greedy_star_solver: " + why);
    const int k = inst.group_count();
    if (k > 64) throw ParameterError("greedy_star_solver: at most 64 groups");
    const std::uint64_t full = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    std::vector<std::uint64_t> mask(inst.size(), 0);
    for (int i = 0; i < k; ++i) {
        for (int v : inst.groups[i]) mask[v] |= std::uint64_t{1} << i;
    }
    const auto& paths = shape.paths;

    std::optional<SteinerSolution> interval;
    for (const auto& p : paths) {
        for (std::size_t a = 0; a < p.size(); ++a) {
            std::uint64_t cov = 0;
            for (std::size_t b = a; b < p.size(); ++b) {
                cov |= mask[p[b]];
                if (cov != full) continue;
                const double cost = static_cast<double>(b - a);
                if (!interval || cost < interval->cost) {
                    SteinerSolution sol;
                    sol.vertices.assign(p.begin() + static_cast<std::ptrdiff_t>(a),
                                        p.begin() + static_cast<std::ptrdiff_t>(b) + 1);
                    for (std::size_t j = a; j < b; ++j) sol.edges.emplace_back(p[j], p[j + 1]);
                    sol.cost = cost;
                    interval = std::move(sol);
                }
                break;
            }
        }
    }

    GreedyStarResult hit;
    std::vector<std::uint64_t> covers(paths.size(), 0);
    for (std::size_t j = 0; j < paths.size(); ++j) {
        for (int v : paths[j]) covers[j] |= mask[v];
    }
    std::uint64_t uncovered = full;
    while (uncovered) {
        int best = -1;
        int gain = 0;
        for (std::size_t j = 0; j < paths.size(); ++j) {
            const int g = std::popcount(covers[j] & uncovered);
            if (g > gain) {
                gain = g;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) throw InternalConsistencyError("greedy_star_solver: a group meets no path");
        hit.hitting_set.push_back(best);
        uncovered &= ~covers[best];
    }
    std::sort(hit.hitting_set.begin(), hit.hitting_set.end());
    SteinerSolution walk;
    for (std::size_t i = 0; i < hit.hitting_set.size(); ++i) {
        const auto& p = paths[hit.hitting_set[i]];
        walk.vertices.insert(walk.vertices.end(), p.begin(), p.end());
        for (std::size_t j = 1; j < p.size(); ++j) {
            walk.edges.emplace_back(p[j - 1], p[j]);
            walk.cost += inst.metric(p[j - 1], p[j]);
        }
        if (i > 0) {
            const int prev_head = paths[hit.hitting_set[i - 1]].front();
            walk.edges.emplace_back(prev_head, p.front());
            walk.cost += inst.metric(prev_head, p.front());
        }
    }
    std::sort(walk.vertices.begin(), walk.vertices.end());
    if (interval && interval->cost <= walk.cost) {
        std::sort(interval->vertices.begin(), interval->vertices.end());
        hit.solution = std::move(*interval);
        hit.single_path = true;
    } else {
        hit.solution = std::move(walk);
    }
    return hit;
}

GstPipelineReport run_gst_pipeline(const MultiEmbedding& me, const GstInstance& inst, bool with_oracle,
                                   int budget) {
    GstPipelineReport rep;
    const ReducedGst reduced = reduce_gst(me, inst);
    rep.target_vertices = reduced.instance.size();
    for (const auto& g : reduced.instance.groups) rep.target_group_sizes.push_back(g.size());
    rep.target = solve_tree_exact(reduced.instance, budget);
    rep.projected = project_solution(me, reduced, rep.target, inst);
    rep.feasible = check_solution(inst, rep.projected).empty();
    rep.alpha_bound = alpha_bound(me);
    rep.bound = 2.0 * rep.alpha_bound;
    rep.holds = rep.feasible;
    if (with_oracle) {
        rep.has_oracle = true;
        rep.oracle = exact_oracle(inst);
        rep.ratio = rep.oracle.cost > 0.0 ? rep.projected.cost / rep.oracle.cost
                                          : (rep.projected.cost > 0.0 ? kInf : 1.0);
        rep.holds = rep.holds && leq_tol(rep.projected.cost, rep.bound * rep.oracle.cost);
    }
    return rep;
}

}  // namespace pathembed
