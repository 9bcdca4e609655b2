#include "pathembed/realize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "pathembed/embed_tree.hpp"
#include "pathembed/errors.hpp"

namespace pathembed {

namespace {

void check_path(const MetricSpace& m, const PointPath& p) {
    if (p.empty()) throw InputError("path is empty");
    for (int x : p) {
        if (x < 0 || x >= m.size()) throw InputError("path visits unknown point " + std::to_string(x));
    }
}

struct Realizer {
    const UltraTree& tree;
    const PointPath& p;
    std::vector<int> tin, tout;
    std::vector<std::vector<int>> fiber_tin;  // sorted entry times of each point's leaves
    std::vector<NodeId> out;

    Realizer(const UltraTree& t, const PointPath& path) : tree(t), p(path) {
        const int n = tree.size();
        tin.assign(n, 0);
        tout.assign(n, 0);
        fiber_tin.assign(tree.source_n(), {});
        int clock = 0;
        std::vector<std::pair<NodeId, std::size_t>> stack{{tree.root(), 0}};
        tin[tree.root()] = clock++;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            const auto& ch = tree.children(u);
            if (next < ch.size()) {
                const NodeId c = ch[next++];
                tin[c] = clock++;
                stack.push_back({c, 0});
            } else {
                tout[u] = clock - 1;
                if (ch.empty()) fiber_tin[tree.point(u)].push_back(tin[u]);
                stack.pop_back();
            }
        }
        for (auto& f : fiber_tin) std::sort(f.begin(), f.end());
    }

    bool has(NodeId c, int idx) const {
        const auto& f = fiber_tin[p[idx]];
        auto it = std::lower_bound(f.begin(), f.end(), tin[c]);
        return it != f.end() && *it <= tout[c];
    }

    int support(NodeId c) const {
        int count = 0;
        for (const auto& f : fiber_tin) {
            auto it = std::lower_bound(f.begin(), f.end(), tin[c]);
            if (it != f.end() && *it <= tout[c]) ++count;
        }
        return count;
    }

    // Child that halves both support and label, child 0 first; otherwise the
    // child with the smaller support.
    NodeId halving_child(NodeId u) {
        const auto& ch = tree.children(u);
        const int whole = support(u);
        int best = -1;
        int best_support = std::numeric_limits<int>::max();
        for (int i = 0; i < 2; ++i) {
            const int s = support(ch[i]);
            if (2 * s <= whole && leq_tol(2.0 * tree.label(ch[i]), tree.label(u))) return ch[i];
            if (s < best_support) {
                best_support = s;
                best = i;
            }
        }
        return ch[best];
    }

    void leaf_of(NodeId u, int a, int b) {
        for (int i = a; i <= b; ++i) {
            if (p[i] != tree.point(u)) {
                throw InternalConsistencyError("realize_path: segment reached a leaf of another point");
            }
            out.push_back(u);
        }
    }

    void realize(NodeId u, int a, int b) {
        if (tree.is_leaf(u)) {
            leaf_of(u, a, b);
            return;
        }
        const auto& ch = tree.children(u);
        if (ch.size() != 2) throw InputError("realize_path: target tree is not binary");
        const NodeId t1 = halving_child(u);
        const NodeId t2 = t1 == ch[0] ? ch[1] : ch[0];
        auto prefix = [&](NodeId c) {
            int e = a;
            while (e <= b && has(c, e)) ++e;
            return e;
        };
        const int e1 = prefix(t1);
        const int e2 = prefix(t2);
        NodeId cur = e2 > e1 ? t2 : t1;
        std::vector<int> j{a};
        std::vector<NodeId> side{cur};
        for (int idx = a + 1; idx <= b; ++idx) {
            if (!has(cur, idx)) {
                cur = cur == t1 ? t2 : t1;
                j.push_back(idx);
                side.push_back(cur);
            }
        }
        const std::size_t s = j.size();
        std::vector<int> k(s, b);
        for (std::size_t i = 0; i + 1 < s; ++i) {
            int idx = j[i + 1] - 1;
            while (idx >= j[i] && has(side[i + 1], idx)) --idx;
            if (idx < j[i]) {
                throw InternalConsistencyError("realize_path: no breakpoint before a subtree switch");
            }
            k[i] = idx;
        }
        for (std::size_t i = 0; i < s; ++i) {
            realize(side[i], j[i], k[i]);
            if (i + 1 < s && k[i] + 1 <= j[i + 1] - 1) {
                realize(t1, k[i] + 1, j[i + 1] - 1);
            }
        }
    }
};

}  // namespace

RepPath realize_path(const MultiEmbedding& me, const PointPath& p, int t) {
    if (!me.is_ultra()) throw InputError("realize_path: target is not an ultrametric tree");
    if (t != me.params.t) {
        throw ParameterError("realize_path: t = " + std::to_string(t) + " but the embedding was built with t = " +
                             std::to_string(me.params.t));
    }
    check_path(me.source, p);
    Realizer r(me.ultra(), p);
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
        if (!r.has(me.ultra().root(), i)) throw InputError("realize_path: point has no representative");
    }
    r.realize(me.ultra().root(), 0, static_cast<int>(p.size()) - 1);
    RepPath out{std::move(r.out), 0.0};
    out.length = rep_length(me, out.seq);
    return out;
}

RepPath realize_path(const MultiEmbedding& me, const PointPath& p) {
    return realize_path(me, p, me.params.t);
}

double realization_bound(const MultiEmbedding& me, const PointPath& p) {
    return alpha_bound(me) * path_length(me.source, p);
}

namespace {

struct Best {
    double value = std::numeric_limits<double>::infinity();
    NodeId id = kNoNode;

    bool improves(double v, NodeId i) const { return v < value || (v == value && i < id); }
};

RepPath backtrack(const MultiEmbedding& me, const PointPath& p, const std::vector<std::vector<NodeId>>& pred,
                  const std::vector<double>& last, const std::vector<NodeId>& last_fiber) {
    Best end;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < last_fiber.size(); ++i) {
        if (end.improves(last[i], last_fiber[i])) {
            end = {last[i], last_fiber[i]};
            pos = i;
        }
    }
    RepPath out;
    out.seq.assign(p.size(), kNoNode);
    out.seq.back() = last_fiber[pos];
    for (std::size_t i = p.size() - 1; i > 0; --i) {
        const auto& fiber = me.fibers[p[i]];
        const auto it = std::lower_bound(fiber.begin(), fiber.end(), out.seq[i]);
        out.seq[i - 1] = pred[i][static_cast<std::size_t>(it - fiber.begin())];
    }
    out.length = end.value;
    return out;
}

bool monotone_labels(const UltraTree& t) {
    for (NodeId u = 1; u < t.size(); ++u) {
        if (t.label(u) > t.label(t.parent(u))) return false;
    }
    return true;
}

// Star targets: a cross-path hop costs depth(u) + depth(v), so one best and
// one best-on-another-path value per stage cover every cross-path move.
RepPath optimal_rep_path_star(const MultiEmbedding& me, const PointPath& p) {
    const StarTree& st = me.star();
    std::vector<std::vector<NodeId>> pred(p.size());
    std::vector<double> dp(me.fibers[p[0]].size(), 0.0);
    std::unordered_map<int, std::vector<std::size_t>> on_path;
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto& prev = me.fibers[p[i - 1]];
        const auto& cur = me.fibers[p[i]];
        Best first, second;
        int first_path = -1;
        on_path.clear();
        for (std::size_t a = 0; a < prev.size(); ++a) {
            const double v = dp[a] + st.depth_from_root(prev[a]);
            const int path = st.path_of(prev[a]);
            on_path[path].push_back(a);
            if (first.improves(v, prev[a])) {
                if (path != first_path) second = first;
                first = {v, prev[a]};
                first_path = path;
            } else if (path != first_path && second.improves(v, prev[a])) {
                second = {v, prev[a]};
            }
        }
        std::vector<double> next(cur.size());
        pred[i].assign(cur.size(), kNoNode);
        for (std::size_t b = 0; b < cur.size(); ++b) {
            const int path = st.path_of(cur[b]);
            const Best& cross = path != first_path ? first : second;
            Best best;
            if (cross.id != kNoNode) best = {cross.value + st.depth_from_root(cur[b]), cross.id};
            const auto it = on_path.find(path);
            if (it != on_path.end()) {
                for (std::size_t a : it->second) {
                    const double v = dp[a] + std::abs(prev[a] - cur[b]);
                    if (best.improves(v, prev[a])) best = {v, prev[a]};
                }
            }
            next[b] = best.value;
            pred[i][b] = best.id;
        }
        dp = std::move(next);
    }
    return backtrack(me, p, pred, dp, me.fibers[p.back()]);
}

}  // namespace

RepPath optimal_rep_path_pairwise(const MultiEmbedding& me, const PointPath& p) {
    check_path(me.source, p);
    std::vector<std::vector<NodeId>> pred(p.size());
    std::vector<double> dp(me.fibers[p[0]].size(), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto& prev = me.fibers[p[i - 1]];
        const auto& cur = me.fibers[p[i]];
        std::vector<double> next(cur.size());
        pred[i].assign(cur.size(), kNoNode);
        for (std::size_t b = 0; b < cur.size(); ++b) {
            Best best;
            for (std::size_t a = 0; a < prev.size(); ++a) {
                const double v = dp[a] + me.distance(prev[a], cur[b]);
                if (best.improves(v, prev[a])) best = {v, prev[a]};
            }
            next[b] = best.value;
            pred[i][b] = best.id;
        }
        dp = std::move(next);
    }
    return backtrack(me, p, pred, dp, me.fibers[p.back()]);
}

RepPath optimal_rep_path(const MultiEmbedding& me, const PointPath& p) {
    if (me.is_star()) {
        check_path(me.source, p);
        return optimal_rep_path_star(me, p);
    }
    if (!monotone_labels(me.ultra())) {
        return optimal_rep_path_pairwise(me, p);
    }
    check_path(me.source, p);
    const UltraTree& tree = me.ultra();
    // M[a]: best (dp, leaf) among previous-fiber leaves below a.
    std::vector<Best> below(tree.size());
    std::vector<NodeId> touched;
    std::vector<std::vector<NodeId>> pred(p.size());
    std::vector<double> dp(me.fibers[p[0]].size(), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto& prev = me.fibers[p[i - 1]];
        const auto& cur = me.fibers[p[i]];
        for (std::size_t a = 0; a < prev.size(); ++a) {
            for (NodeId u = prev[a]; u != kNoNode; u = tree.parent(u)) {
                if (below[u].id == kNoNode) touched.push_back(u);
                if (below[u].improves(dp[a], prev[a])) {
                    below[u] = {dp[a], prev[a]};
                } else if (below[u].id != prev[a]) {
                    // Ancestors already hold something at least as good.
                    break;
                }
            }
        }
        std::vector<double> next(cur.size());
        pred[i].assign(cur.size(), kNoNode);
        for (std::size_t b = 0; b < cur.size(); ++b) {
            Best best;
            for (NodeId u = cur[b]; u != kNoNode; u = tree.parent(u)) {
                if (below[u].id == kNoNode) continue;
                const double v = below[u].value + (u == cur[b] ? 0.0 : tree.label(u));
                if (best.improves(v, below[u].id)) best = {v, below[u].id};
            }
            next[b] = best.value;
            pred[i][b] = best.id;
        }
        for (NodeId u : touched) below[u] = Best{};
        touched.clear();
        dp = std::move(next);
    }
    return backtrack(me, p, pred, dp, me.fibers[p.back()]);
}

std::string to_string(WalkMode mode) {
    return mode == WalkMode::local ? "local" : "uniform";
}

WalkMode parse_walk_mode(const std::string& name) {
    if (name == "local") return WalkMode::local;
    if (name == "uniform") return WalkMode::uniform;
    throw InputError("unknown walk mode '" + name + "'");
}

PointPath sample_walk(const MetricSpace& m, int steps, WalkMode mode, Rng& rng) {
    if (m.size() < 1) throw InputError("sample_walk: empty metric");
    if (steps < 0) throw ParameterError("sample_walk: steps must be >= 0");
    PointPath p{static_cast<int>(rng.index(m.size()))};
    std::vector<int> options;
    for (int step = 0; step < steps && m.size() > 1; ++step) {
        const int x = p.back();
        options.clear();
        if (mode == WalkMode::uniform) {
            for (int y = 0; y < m.size(); ++y) {
                if (y != x) options.push_back(y);
            }
        } else {
            double nearest = std::numeric_limits<double>::infinity();
            for (int y = 0; y < m.size(); ++y) {
                const double d = m(x, y);
                if (y == x || !(d > 0.0)) continue;
                if (d < nearest) {
                    nearest = d;
                    options.assign(1, y);
                } else if (d == nearest) {
                    options.push_back(y);
                }
            }
        }
        p.push_back(options[rng.index(options.size())]);
    }
    return p;
}

PointPath sweep_path(const MetricSpace& m) {
    PointPath p(m.size());
    std::iota(p.begin(), p.end(), 0);
    if (m.size() < 2) return p;
    const int x = diameter_anchor(m).x;
    std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return m(x, a) < m(x, b); });
    return p;
}

namespace {

TrialRecord run_trial(const MultiEmbedding& me, const PointPath& p, int trial, double bound) {
    TrialRecord rec;
    rec.trial = trial;
    rec.path_len = path_length(me.source, p);
    rec.optimal = optimal_rep_path(me, p).length;
    rec.realized = std::numeric_limits<double>::quiet_NaN();
    if (me.is_ultra() && me.params.t > 0) {
        rec.realized = realize_path(me, p).length;
        if (!leq_tol(rec.realized, bound * rec.path_len)) rec.violation = true;
    } else if (me.is_star()) {
        bool walk = true;
        for (std::size_t i = 1; i < p.size(); ++i) walk = walk && me.source(p[i - 1], p[i]) == 1.0;
        if (walk) {
            const auto r = realize_in_star(me, p);
            rec.realized = r.path.length;
            if (!leq_tol(r.path.length, r.chunk_bound)) rec.violation = true;
            if (rec.path_len >= me.star().s() && !leq_tol(r.path.length, r.ratio_bound)) rec.violation = true;
        }
    }
    if (!std::isnan(rec.realized) && !leq_tol(rec.optimal, rec.realized)) rec.violation = true;
    if (!leq_tol(rec.path_len, rec.optimal)) rec.violation = true;
    return rec;
}

}  // namespace

DistortionStats distortion_stats(const MultiEmbedding& me, const SamplerSpec& sampler, int trials,
                                 std::uint64_t seed, int jobs) {
    if (trials < 1) throw ParameterError("distortion_stats: trials must be >= 1");
    if (jobs < 1) throw ParameterError("distortion_stats: jobs must be >= 1");
    DistortionStats stats;
    stats.trials = trials;
    if (me.is_star()) {
        stats.bound = 2.0 + me.star().delta() / me.star().s();
    } else {
        stats.bound = me.params.t > 0 ? alpha_bound(me) : 0.0;
    }
    if (me.is_ultra()) me.ultra().build_index();
    const int total = trials + (sampler.sweep ? 1 : 0);
    stats.records.resize(total);
    auto work = [&](int first, int stride) {
        for (int i = first; i < total; i += stride) {
            PointPath p;
            if (i < trials) {
                Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(i));
                p = sample_walk(me.source, sampler.steps, sampler.mode, rng);
            } else {
                p = sweep_path(me.source);
            }
            stats.records[i] = run_trial(me, p, i, stats.bound);
        }
    };
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
        for (auto& th : pool) th.join();
    }
    double sum = 0.0;
    int counted = 0;
    bool any_realized = false;
    for (const auto& r : stats.records) {
        if (r.violation) ++stats.violations;
        if (!(r.path_len > 0.0)) continue;
        const double ro = r.optimal / r.path_len;
        stats.max_ratio_optimal = std::max(stats.max_ratio_optimal, ro);
        sum += ro;
        ++counted;
        if (!std::isnan(r.realized)) {
            any_realized = true;
            stats.max_ratio_realized = std::max(stats.max_ratio_realized, r.realized / r.path_len);
        }
    }
    stats.mean_ratio = counted ? sum / counted : 0.0;
    if (!any_realized) stats.max_ratio_realized = std::numeric_limits<double>::quiet_NaN();
    return stats;
}

std::string stats_csv(const DistortionStats& stats) {
    std::ostringstream out;
    out.precision(17);
    out << "trial,path_len,realized,optimal\n";
    for (const auto& r : stats.records) {
        out << r.trial << ',' << r.path_len << ',';
        if (std::isnan(r.realized)) {
            out << "";
        } else {
            out << r.realized;
        }
        out << ',' << r.optimal << '\n';
    }
    return out.str();
}

LowerBoundReport lower_bound_check(const MultiEmbedding& me) {
    const MetricSpace& m = me.source;
    const int n = m.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (m(i, j) != std::abs(i - j)) throw InputError("lower_bound_check: source is not the path metric");
        }
    }
    LowerBoundReport rep;
    rep.n = n;
    PointPath p(n);
    std::iota(p.begin(), p.end(), 0);
    rep.path = optimal_rep_path(me, p);
    rep.optimal = rep.path.length;
    rep.required = n / 2.0 * std::log2(static_cast<double>(n));
    rep.implied_distortion = n > 1 ? rep.required / (n - 1) : 0.0;
    rep.holds = rep.optimal >= rep.required;
    return rep;
}

}  // namespace pathembed
