#include "pathembed/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

#include "pathembed/errors.hpp"
#include "pathembed/rng.hpp"

namespace pathembed {

bool leq_tol(double a, double b) {
    return a <= b + kRelTol * std::max(1.0, std::abs(b));
}

MetricSpace::MetricSpace(int n, std::vector<double> distances, std::vector<std::string> labels)
    : n_(n), d_(std::move(distances)), labels_(std::move(labels)) {
    if (n < 0 || d_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw InputError("metric: distance matrix must have n*n entries");
    }
    if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n)) {
        throw InputError("metric: labels must have n entries");
    }
}

double MetricSpace::diameter() const {
    double best = 0.0;
    for (double v : d_) {
        best = std::max(best, v);
    }
    return best;
}

double MetricSpace::min_positive_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (double v : d_) {
        if (v > 0.0) {
            best = std::min(best, v);
        }
    }
    return best;
}

double MetricSpace::aspect_ratio() const {
    if (n_ < 2) {
        return 1.0;
    }
    const double lo = min_positive_distance();
    if (!std::isfinite(lo)) {
        return 1.0;
    }
    return diameter() / lo;
}

bool MetricSpace::integral() const {
    return std::all_of(d_.begin(), d_.end(), [](double v) { return v == std::floor(v) && v < 9.0e15; });
}

MetricSpace MetricSpace::subspace(std::span<const int> points) const {
    const int k = static_cast<int>(points.size());
    std::vector<double> d(static_cast<std::size_t>(k) * k);
    std::vector<std::string> names;
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            d[static_cast<std::size_t>(a) * k + b] = (*this)(points[a], points[b]);
        }
        if (!labels_.empty()) {
            names.push_back(labels_[points[a]]);
        }
    }
    return MetricSpace(k, std::move(d), std::move(names));
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
    }
    return adj;
}

int Graph::max_degree() const {
    std::vector<int> deg(n, 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool Graph::connected() const {
    if (n <= 1) {
        return true;
    }
    const auto adj = adjacency();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

GeneratorKind parse_generator_kind(const std::string& name) {
    if (name == "path") return GeneratorKind::path;
    if (name == "cycle") return GeneratorKind::cycle;
    if (name == "hypercube") return GeneratorKind::hypercube;
    if (name == "random_regular") return GeneratorKind::random_regular;
    if (name == "random_metric") return GeneratorKind::random_metric;
    throw ParameterError("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::path: return "path";
        case GeneratorKind::cycle: return "cycle";
        case GeneratorKind::hypercube: return "hypercube";
        case GeneratorKind::random_regular: return "random_regular";
        case GeneratorKind::random_metric: return "random_metric";
    }
    return "unknown";
}

Graph path_graph(int n) {
    if (n < 1) {
        throw ParameterError("path: n must be >= 1");
    }
    Graph g{n, {}, true};
    for (int i = 0; i + 1 < n; ++i) {
        g.edges.push_back({i, i + 1, 1.0});
    }
    return g;
}

Graph cycle_graph(int n) {
    if (n < 3) {
        throw ParameterError("cycle: n must be >= 3");
    }
    Graph g = path_graph(n);
    g.edges.push_back({0, n - 1, 1.0});
    return g;
}

Graph hypercube_graph(int h) {
    if (h < 1 || h > 20) {
        throw ParameterError("hypercube: dimension h must be in [1, 20]");
    }
    const int n = 1 << h;
    Graph g{n, {}, true};
    for (int v = 0; v < n; ++v) {
        for (int b = 0; b < h; ++b) {
            const int u = v ^ (1 << b);
            if (v < u) {
                g.edges.push_back({v, u, 1.0});
            }
        }
    }
    return g;
}

// Pairing model with whole-graph restarts; rejects loops, multi-edges and
// disconnected results.
Graph random_regular_graph(int n, int deg, std::uint64_t seed) {
    if (n < 2 || deg < 1 || deg >= n || (static_cast<long long>(n) * deg) % 2 != 0) {
        throw ParameterError("random_regular: need n >= 2, 1 <= deg < n and n*deg even");
    }
    constexpr int kMaxAttempts = 10000;
    Rng rng(seed);
    std::vector<int> stubs;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        stubs.clear();
        for (int v = 0; v < n; ++v) {
            for (int j = 0; j < deg; ++j) {
                stubs.push_back(v);
            }
        }
        rng.shuffle(stubs);
        std::set<std::pair<int, int>> seen;
        Graph g{n, {}, true};
        bool simple = true;
        for (std::size_t i = 0; i < stubs.size(); i += 2) {
            int u = stubs[i];
            int v = stubs[i + 1];
            if (u == v) {
                simple = false;
                break;
            }
            if (u > v) std::swap(u, v);
            if (!seen.insert({u, v}).second) {
                simple = false;
                break;
            }
        }
        if (!simple) {
            continue;
        }
        for (const auto& [u, v] : seen) {
            g.edges.push_back({u, v, 1.0});
        }
        if (g.connected()) {
            return g;
        }
    }
    throw GenerationError("random_regular: no simple connected graph after retry budget");
}

MetricSpace random_metric(int n, std::uint64_t seed) {
    if (n < 1) {
        throw ParameterError("random_metric: n must be >= 1");
    }
    Rng rng(seed);
    Graph g{n, {}, false};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            g.edges.push_back({i, j, static_cast<double>(rng.uniform_int(1, 10))});
        }
    }
    return from_graph(g);
}

std::variant<Graph, MetricSpace> generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorKind::path: return path_graph(spec.n);
        case GeneratorKind::cycle: return cycle_graph(spec.n);
        case GeneratorKind::hypercube: return hypercube_graph(spec.h);
        case GeneratorKind::random_regular: return random_regular_graph(spec.n, spec.deg, spec.seed);
        case GeneratorKind::random_metric: return random_metric(spec.n, spec.seed);
    }
    throw ParameterError("unknown generator kind");
}

MetricSpace generate_metric(const GeneratorSpec& spec) {
    auto out = generate(spec);
    if (auto* g = std::get_if<Graph>(&out)) {
        return from_graph(*g);
    }
    return std::get<MetricSpace>(std::move(out));
}

MetricSpace from_graph(const Graph& g) {
    const int n = g.n;
    for (const Edge& e : g.edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
            throw InputError("graph: edge endpoint out of range");
        }
        if (e.u == e.v) {
            throw InputError("graph: self-loop");
        }
        if (!(e.w > 0.0) || !std::isfinite(e.w)) {
            throw InputError("graph: edge weights must be positive and finite");
        }
    }
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<std::size_t>(n) * n, kInf);
    using Item = std::pair<double, int>;
    for (int s = 0; s < n; ++s) {
        double* row = d.data() + static_cast<std::size_t>(s) * n;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        row[s] = 0.0;
        pq.push({0.0, s});
        while (!pq.empty()) {
            const auto [du, u] = pq.top();
            pq.pop();
            if (du > row[u]) continue;
            for (const auto& [v, w] : adj[u]) {
                if (du + w < row[v]) {
                    row[v] = du + w;
                    pq.push({row[v], v});
                }
            }
        }
        for (int v = 0; v < n; ++v) {
            if (row[v] == kInf) {
                throw InfiniteDistanceError("graph is disconnected: no path between " +
                                            std::to_string(s) + " and " + std::to_string(v));
            }
        }
    }
    // Dijkstra sums can differ in the last bit between directions; force symmetry.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = std::min(d[static_cast<std::size_t>(i) * n + j], d[static_cast<std::size_t>(j) * n + i]);
            d[static_cast<std::size_t>(i) * n + j] = v;
            d[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return MetricSpace(n, std::move(d));
}

DiameterAnchor diameter_anchor(const MetricSpace& m, std::span<const int> points) {
    const std::size_t k = points.size();
    if (k < 2) {
        throw DegenerateInputError("diameter_anchor: need at least two points");
    }
    DiameterAnchor best{points[0], points[1], -1.0};
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const double v = m(points[a], points[b]);
            if (v > best.delta) {
                best = {points[a], points[b], v};
            }
        }
    }
    auto small_ball = [&](int center) {
        std::size_t inside = 0;
        for (int y : points) {
            if (4.0 * m(center, y) < best.delta) {
                ++inside;
            }
        }
        return 2 * inside <= k;
    };
    int lo = std::min(best.x, best.xbar);
    int hi = std::max(best.x, best.xbar);
    if (small_ball(lo)) {
        return {lo, hi, best.delta};
    }
    if (small_ball(hi)) {
        return {hi, lo, best.delta};
    }
    throw InternalConsistencyError("diameter_anchor: neither diameter endpoint has a small Delta/4 ball");
}

DiameterAnchor diameter_anchor(const MetricSpace& m) {
    std::vector<int> all(m.size());
    std::iota(all.begin(), all.end(), 0);
    return diameter_anchor(m, all);
}

std::string to_string(MetricViolation::Kind kind) {
    switch (kind) {
        case MetricViolation::Kind::zero_diagonal: return "zero_diagonal";
        case MetricViolation::Kind::symmetry: return "symmetry";
        case MetricViolation::Kind::positivity: return "positivity";
        case MetricViolation::Kind::triangle: return "triangle";
        case MetricViolation::Kind::non_finite: return "non_finite";
    }
    return "unknown";
}

MetricReport validate(const MetricSpace& m, std::size_t limit) {
    MetricReport report;
    const int n = m.size();
    auto add = [&](MetricViolation v) {
        if (report.violations.size() < limit) {
            report.violations.push_back(v);
        }
    };
    using K = MetricViolation::Kind;
    for (int i = 0; i < n; ++i) {
        if (m(i, i) != 0.0) add({K::zero_diagonal, i, i});
        for (int j = 0; j < n; ++j) {
            const double v = m(i, j);
            if (!std::isfinite(v)) {
                add({K::non_finite, i, j});
                continue;
            }
            if (i < j && v != m(j, i)) add({K::symmetry, i, j});
            if (i != j && !(v > 0.0)) add({K::positivity, i, j});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double direct = m(i, k);
            for (int j = 0; j < n; ++j) {
                if (!leq_tol(direct, m(i, j) + m(j, k))) {
                    add({K::triangle, i, j, k});
                }
            }
        }
    }
    return report;
}

Graph unit_distance_graph(const MetricSpace& m) {
    Graph g{m.size(), {}, true};
    for (int i = 0; i < m.size(); ++i) {
        for (int j = i + 1; j < m.size(); ++j) {
            if (m(i, j) == 1.0) {
                g.edges.push_back({i, j, 1.0});
            }
        }
    }
    return g;
}

}  // namespace pathembed
