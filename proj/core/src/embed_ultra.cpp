#include "pathembed/embed_ultra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "pathembed/errors.hpp"
#include "pathembed/rng.hpp"

namespace pathembed {

double beta_size(int n, int t) {
    if (t <= 0) throw ParameterError("beta: t must be >= 1");
    if (n < 1) throw ParameterError("beta: n must be >= 1");
    return std::pow(std::log2(static_cast<double>(n)), 1.0 / t);
}

double beta_diameter(double delta, int t) {
    if (t <= 0) throw ParameterError("beta: t must be >= 1");
    const double base = t * std::log2(4.0 * delta);
    return std::pow(std::max(base, 0.0), 2.0 / t);
}

BetaChoice beta(int n, double delta, int t) {
    if (t <= 0) throw ParameterError("beta: t must be >= 1");
    if (n < 1) throw ParameterError("beta: n must be >= 1");
    if (!(delta >= 1.0)) throw ParameterError("beta: delta must be >= 1");
    const double a = beta_size(n, t);
    const double b = beta_diameter(delta, t);
    if (a <= b) return {a, Criterion::size};
    return {b, Criterion::diameter};
}

std::vector<int> ShellDecomposition::shell(int i) const {
    if (i == 0) return rings.at(0);
    std::vector<int> out;
    std::set_difference(rings.at(i).begin(), rings.at(i).end(), rings.at(i - 1).begin(), rings.at(i - 1).end(),
                        std::back_inserter(out));
    return out;
}

ShellDecomposition decompose_shells(const MetricSpace& m, std::span<const int> points, int anchor, double delta,
                                    int t) {
    if (t <= 0) throw ParameterError("decompose_shells: t must be >= 1");
    ShellDecomposition dec;
    dec.anchor = anchor;
    dec.delta = delta;
    dec.t = t;
    dec.n = static_cast<int>(points.size());
    dec.rings.assign(t + 1, {});
    dec.rings[0] = {anchor};
    // Ring index of y: the smallest i with 4t d < i delta.
    for (int y : points) {
        const double scaled = 4.0 * t * m(anchor, y);
        for (int i = 1; i <= t; ++i) {
            if (scaled < i * delta) {
                for (int j = i; j <= t; ++j) dec.rings[j].push_back(y);
                break;
            }
        }
    }
    for (int i = 1; i <= t; ++i) {
        std::sort(dec.rings[i].begin(), dec.rings[i].end());
    }
    dec.eps.resize(t + 1);
    for (int i = 0; i <= t; ++i) {
        dec.eps[i] = static_cast<double>(dec.rings[i].size()) / dec.n;
    }
    return dec;
}

namespace {

__extension__ typedef unsigned __int128 u128;

// a * n^(b-1) >= c^b in 128-bit integers when it fits; nullopt otherwise.
std::optional<bool> exact_power_check(std::uint64_t a, std::uint64_t c, std::uint64_t n, int b) {
    if (b < 1) return std::nullopt;
    const double bits = b * std::log2(static_cast<double>(std::max<std::uint64_t>(n, 2))) + 1;
    if (bits > 126) return std::nullopt;
    u128 lhs = a;
    u128 rhs = 1;
    for (int i = 0; i < b - 1; ++i) lhs *= n;
    for (int i = 0; i < b; ++i) rhs *= c;
    return lhs >= rhs;
}

bool log_geq(double lhs, double rhs) {
    return lhs >= rhs - kRelTol * std::max(1.0, std::abs(rhs));
}

}  // namespace

int select_shell(const ShellDecomposition& dec, int n, double delta, int t, Criterion criterion) {
    if (t != dec.t) throw ParameterError("select_shell: t does not match the decomposition");
    if (n != dec.n) throw ParameterError("select_shell: n does not match the decomposition");
    const double logn = std::log2(static_cast<double>(n));
    for (int i = 1; i <= t; ++i) {
        const double prev = dec.ring_size(i - 1);
        const double cur = dec.ring_size(i);
        const double lhs = std::log2(prev / n);
        const double lcur = std::log2(cur / n);
        bool ok = false;
        if (criterion == Criterion::diameter) {
            const double b_half = beta_diameter(delta / 2.0, t);
            const double b_full = beta_diameter(delta, t);
            ok = log_geq(lhs, b_half * lcur + (b_half - b_full) * logn);
        } else {
            const double b = beta_size(n, t);
            const double rb = std::round(b);
            std::optional<bool> exact;
            if (std::abs(b - rb) < 1e-12) {
                exact = exact_power_check(static_cast<std::uint64_t>(prev), static_cast<std::uint64_t>(cur),
                                          static_cast<std::uint64_t>(n), static_cast<int>(rb));
            }
            ok = exact ? *exact : log_geq(lhs, b * lcur);
        }
        if (ok) return i;
    }
    throw InternalConsistencyError("select_shell: no shell index satisfies the growth condition");
}

namespace {

struct Builder {
    const MetricSpace& m;
    int t;
    Criterion criterion;
    double unit;  // global minimum distance; normalizes subset diameters
    const UltraBuildOptions& options;
    UltraTree tree;
    std::size_t leaves = 0;
    int fallbacks = 0;

    NodeId leaf(int point, NodeId parent) {
        if (++leaves > options.leaf_budget) {
            throw BudgetError("build_ultrametric_embedding: leaf budget of " + std::to_string(options.leaf_budget) +
                              " exceeded");
        }
        return tree.add_node(0.0, parent, point);
    }

    void build(const std::vector<int>& points, NodeId parent) {
        if (points.size() == 1) {
            leaf(points[0], parent);
            return;
        }
        const DiameterAnchor anchor = diameter_anchor(m, points);
        const NodeId id = tree.add_node(anchor.delta, parent);
        if (points.size() == 2) {
            leaf(points[0], id);
            leaf(points[1], id);
            return;
        }
        const int n = static_cast<int>(points.size());
        const auto dec = decompose_shells(m, points, anchor.x, anchor.delta, t);
        Criterion rule = criterion;
        const double normalized = anchor.delta / unit;
        if (rule == Criterion::diameter && !(normalized >= 1.0)) {
            rule = Criterion::size;
            ++fallbacks;
        }
        const int i = select_shell(dec, n, normalized, t, rule);
        std::vector<int> left = dec.rings[i];
        std::vector<int> right;
        std::set_difference(points.begin(), points.end(), dec.rings[i - 1].begin(), dec.rings[i - 1].end(),
                            std::back_inserter(right));
        if (options.trace) {
            options.trace->steps.push_back({id, anchor.x, anchor.delta, i, rule, dec.eps, left, right});
        }
        build(left, id);
        build(right, id);
    }
};

}  // namespace

MultiEmbedding build_ultrametric_embedding(const MetricSpace& m, int t, const UltraBuildOptions& options) {
    if (t <= 0) throw ParameterError("build_ultrametric_embedding: t must be >= 1");
    if (m.size() < 1) throw InputError("build_ultrametric_embedding: empty metric");
    const double aspect = m.aspect_ratio();
    const BetaChoice choice = beta(m.size(), aspect, t);
    const double unit = m.size() >= 2 ? m.min_positive_distance() : 1.0;
    if (m.size() >= 2 && !(unit > 0.0)) {
        throw InputError("build_ultrametric_embedding: metric has coincident distinct points");
    }
    Builder b{m, t, choice.criterion, unit, options, UltraTree(1.0, m.size())};
    std::vector<int> all(m.size());
    std::iota(all.begin(), all.end(), 0);
    b.build(all, kNoNode);
    EmbeddingParams params;
    params.kind = EmbeddingKind::ultra;
    params.t = t;
    params.beta = choice.beta;
    params.criterion = choice.criterion;
    params.criterion_fallbacks = b.fallbacks;
    return make_embedding(m, std::move(b.tree), params);
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
    std::size_t operator()(const Bits& b) const {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (auto w : b) h = Rng::mix(h ^ w);
        return static_cast<std::size_t>(h);
    }
};

std::vector<int> members(const Bits& b) {
    std::vector<int> out;
    for (std::size_t w = 0; w < b.size(); ++w) {
        std::uint64_t x = b[w];
        while (x) {
            out.push_back(static_cast<int>(w * 64 + std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

int popcount(const Bits& b) {
    int c = 0;
    for (auto w : b) c += std::popcount(w);
    return c;
}

}  // namespace

EmbeddingAudit audit_embedding(const MultiEmbedding& me, int t, std::size_t violation_limit) {
    if (!me.is_ultra()) throw InputError("audit_embedding: target is not an ultrametric tree");
    if (t <= 0) throw ParameterError("audit_embedding: t must be >= 1");
    const UltraTree& tree = me.ultra();
    const MetricSpace& m = me.source;
    const int n = m.size();
    EmbeddingAudit audit;
    auto report = [&](std::string prop, std::string detail, NodeId node = kNoNode, NodeId a = kNoNode,
                      NodeId b = kNoNode) {
        if (audit.violations.size() < violation_limit) {
            audit.violations.push_back({std::move(prop), std::move(detail), node, a, b});
        }
    };

    audit.leaf_count = tree.leaf_count();
    const BetaChoice choice = beta(std::max(n, 1), std::max(m.aspect_ratio(), 1.0), t);
    audit.beta = choice.beta;
    audit.criterion = choice.criterion;
    audit.size_bound = std::pow(static_cast<double>(n), choice.beta);
    if (!leq_tol(audit.leaf_count, audit.size_bound)) {
        report("size", "leaf count " + std::to_string(audit.leaf_count) + " exceeds n^beta");
    }

    // Fibers.
    std::vector<int> seen(tree.size(), 0);
    if (static_cast<int>(me.fibers.size()) != n) {
        report("fibers", "fiber count differs from the source size");
    } else {
        for (int x = 0; x < n; ++x) {
            if (me.fibers[x].empty()) report("fibers", "point " + std::to_string(x) + " has no representative");
            for (NodeId u : me.fibers[x]) {
                if (u < 0 || u >= tree.size() || !tree.is_leaf(u) || tree.point(u) != x) {
                    report("fibers", "node " + std::to_string(u) + " is not a leaf of point " + std::to_string(x), u);
                } else if (seen[u]++) {
                    report("fibers", "leaf " + std::to_string(u) + " appears in two fibers", u);
                }
            }
        }
        for (NodeId u = 0; u < tree.size(); ++u) {
            if (tree.is_leaf(u) && !seen[u]) report("fibers", "leaf " + std::to_string(u) + " is in no fiber", u);
        }
    }

    for (const auto& v : validate_hst(tree, 1.0).violations) {
        report("hst", to_string(v.kind), v.parent, v.child);
    }
    if (!audit.ok()) {
        return audit;
    }

    // Supports, bottom-up (children always have larger ids than parents).
    const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
    std::vector<Bits> table;
    std::unordered_map<Bits, int, BitsHash> intern;
    auto intern_bits = [&](Bits b) {
        auto [it, inserted] = intern.emplace(b, static_cast<int>(table.size()));
        if (inserted) table.push_back(std::move(b));
        return it->second;
    };
    std::vector<int> support(tree.size(), -1);
    for (NodeId u = tree.size() - 1; u >= 0; --u) {
        Bits b(words, 0);
        if (tree.is_leaf(u)) {
            const int x = tree.point(u);
            b[x / 64] |= std::uint64_t{1} << (x % 64);
        } else {
            for (NodeId c : tree.children(u)) {
                const Bits& cb = table[support[c]];
                for (std::size_t w = 0; w < words; ++w) b[w] |= cb[w];
            }
        }
        support[u] = intern_bits(std::move(b));
    }

    struct Cross {
        double max_cross = 0.0;  // max d over the two supports
        double min_sep = 0.0;    // min d between exclusive points, +inf when none
        int xa = -1, xb = -1;
    };
    std::map<std::pair<int, int>, Cross> cache;
    auto cross = [&](int sa, int sb) -> const Cross& {
        auto it = cache.find({sa, sb});
        if (it != cache.end()) return it->second;
        const Bits& A = table[sa];
        const Bits& B = table[sb];
        const auto ma = members(A);
        const auto mb = members(B);
        auto in = [](const Bits& b, int x) { return (b[x / 64] >> (x % 64)) & 1u; };
        Cross c;
        c.min_sep = std::numeric_limits<double>::infinity();
        for (int x : ma) {
            const bool only_a = !in(B, x);
            for (int y : mb) {
                const double d = m(x, y);
                if (d > c.max_cross) {
                    c.max_cross = d;
                    c.xa = x;
                    c.xb = y;
                }
                if (only_a && !in(A, y) && d < c.min_sep) c.min_sep = d;
            }
        }
        return cache.emplace(std::make_pair(sa, sb), c).first->second;
    };

    for (NodeId u = 0; u < tree.size(); ++u) {
        if (tree.is_leaf(u)) continue;
        ++audit.internal_nodes;
        const auto& ch = tree.children(u);
        const double lab = tree.label(u);
        if (ch.size() != 2) {
            report("binary", "node has " + std::to_string(ch.size()) + " children", u);
        }
        for (std::size_t i = 0; i < ch.size(); ++i) {
            for (std::size_t j = i + 1; j < ch.size(); ++j) {
                const Cross& c = cross(support[ch[i]], support[ch[j]]);
                if (c.max_cross > lab) {
                    report("non_contractive",
                           "points " + std::to_string(c.xa) + "," + std::to_string(c.xb) + " contracted below label",
                           u, ch[i], ch[j]);
                }
                if (std::isfinite(c.min_sep) && !leq_tol(lab, 4.0 * t * c.min_sep)) {
                    report("separation", "exclusive points closer than label/(4t)", u, ch[i], ch[j]);
                }
            }
        }
        if (ch.size() == 2) {
            const int whole = popcount(table[support[u]]);
            auto halves = [&](NodeId c) {
                const bool s = 2 * popcount(table[support[c]]) <= whole;
                const bool d = leq_tol(2.0 * tree.label(c), lab);
                return std::pair{s, d};
            };
            const auto h0 = halves(ch[0]);
            const auto h1 = halves(ch[1]);
            if (!(h0.first && h0.second) && !(h1.first && h1.second)) {
                if (!h0.first && !h1.first) {
                    report("support_half", "no child holds at most half of the support", u);
                } else if (!h0.second && !h1.second) {
                    report("diameter_half", "no child has at most half the label", u);
                } else {
                    report("support_half", "support and label halve at different children", u);
                }
            }
        }
    }

    if (audit.leaf_count <= 2000) {
        audit.exhaustive_leaf_pairs = true;
        const auto leaves = tree.leaves();
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            for (std::size_t j = i + 1; j < leaves.size(); ++j) {
                const double dt = tree.distance(leaves[i], leaves[j]);
                if (dt < m(tree.point(leaves[i]), tree.point(leaves[j]))) {
                    report("non_contractive", "leaf pair contracted", kNoNode, leaves[i], leaves[j]);
                }
            }
        }
    }
    return audit;
}

}  // namespace pathembed
