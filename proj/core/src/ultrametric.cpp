#include "pathembed/ultrametric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pathembed/errors.hpp"
#include "pathembed/metric.hpp"

namespace pathembed {

UltraTree::UltraTree(const UltraTree& other)
    : k_(other.k_), source_n_(other.source_n_), nodes_(other.nodes_) {}

UltraTree& UltraTree::operator=(const UltraTree& other) {
    if (this != &other) {
        k_ = other.k_;
        source_n_ = other.source_n_;
        nodes_ = other.nodes_;
        invalidate();
    }
    return *this;
}

NodeId UltraTree::add_node(double label, NodeId parent, int point) {
    const NodeId id = size();
    if (parent == kNoNode) {
        if (!nodes_.empty()) {
            throw InputError("ultra tree: only the first node may be the root");
        }
    } else if (parent < 0 || parent >= id) {
        throw LookupError("ultra tree: unknown parent " + std::to_string(parent));
    }
    nodes_.push_back(Node{label, parent, {}, point});
    if (parent != kNoNode) {
        nodes_[parent].children.push_back(id);
    }
    if (!lazy_ || lazy_->index) {
        invalidate();
    }
    return id;
}

void UltraTree::set_label(NodeId u, double label) {
    nodes_.at(u).label = label;
}

void UltraTree::set_point(NodeId leaf, int point) {
    nodes_.at(leaf).point = point;
}

std::vector<NodeId> UltraTree::leaves() const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < size(); ++u) {
        if (nodes_[u].children.empty()) {
            out.push_back(u);
        }
    }
    return out;
}

int UltraTree::leaf_count() const {
    return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                          [](const Node& n) { return n.children.empty(); }));
}

std::vector<std::vector<NodeId>> UltraTree::fibers() const {
    std::vector<std::vector<NodeId>> out(source_n_);
    for (NodeId u = 0; u < size(); ++u) {
        const Node& nd = nodes_[u];
        if (nd.children.empty()) {
            if (nd.point < 0 || nd.point >= source_n_) {
                throw LookupError("ultra tree: leaf " + std::to_string(u) + " has no valid point");
            }
            out[nd.point].push_back(u);
        }
    }
    return out;
}

void UltraTree::build_index() const {
    (void)index();
}

const UltraTree::LcaIndex& UltraTree::index() const {
    std::call_once(lazy_->once, [this] {
        auto idx = std::make_unique<LcaIndex>();
        const int n = size();
        idx->first.assign(n, -1);
        idx->depth.assign(n, 0);
        if (n > 0) {
            // Iterative Euler tour: (node, next child index).
            std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
            idx->euler.push_back(0);
            idx->euler_depth.push_back(0);
            idx->first[0] = 0;
            while (!stack.empty()) {
                auto& [u, next] = stack.back();
                if (next < nodes_[u].children.size()) {
                    const NodeId c = nodes_[u].children[next++];
                    idx->depth[c] = idx->depth[u] + 1;
                    idx->first[c] = static_cast<int>(idx->euler.size());
                    idx->euler.push_back(c);
                    idx->euler_depth.push_back(idx->depth[c]);
                    stack.push_back({c, 0});
                } else {
                    stack.pop_back();
                    if (!stack.empty()) {
                        const NodeId p = stack.back().first;
                        idx->euler.push_back(p);
                        idx->euler_depth.push_back(idx->depth[p]);
                    }
                }
            }
        }
        const int len = static_cast<int>(idx->euler.size());
        idx->table.emplace_back(len);
        for (int i = 0; i < len; ++i) {
            idx->table[0][i] = i;
        }
        for (int j = 1; (1 << j) <= len; ++j) {
            const auto& prev = idx->table[j - 1];
            std::vector<int> cur(len - (1 << j) + 1);
            const int half = 1 << (j - 1);
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const int a = prev[i];
                const int b = prev[i + half];
                cur[i] = idx->euler_depth[a] <= idx->euler_depth[b] ? a : b;
            }
            idx->table.push_back(std::move(cur));
        }
        lazy_->index = std::move(idx);
    });
    return *lazy_->index;
}

NodeId UltraTree::lca(NodeId a, NodeId b) const {
    if (a < 0 || b < 0 || a >= size() || b >= size()) {
        throw LookupError("ultra tree: unknown node");
    }
    const LcaIndex& idx = index();
    int lo = idx.first[a];
    int hi = idx.first[b];
    if (lo > hi) std::swap(lo, hi);
    const int width = hi - lo + 1;
    const int j = std::bit_width(static_cast<unsigned>(width)) - 1;
    const int x = idx.table[j][lo];
    const int y = idx.table[j][hi - (1 << j) + 1];
    return idx.euler[idx.euler_depth[x] <= idx.euler_depth[y] ? x : y];
}

double UltraTree::distance(NodeId a, NodeId b) const {
    if (a < 0 || b < 0 || a >= size() || b >= size() || !is_leaf(a) || !is_leaf(b)) {
        throw LookupError("ultra tree: distance queried on a non-leaf id");
    }
    if (a == b) {
        return 0.0;
    }
    return nodes_[lca(a, b)].label;
}

int UltraTree::depth(NodeId u) const {
    return index().depth.at(u);
}

int UltraTree::height() const {
    const auto& d = index().depth;
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

UltraTree UltraTree::canonical() const {
    UltraTree out(k_, source_n_);
    if (nodes_.empty()) {
        return out;
    }
    std::vector<std::pair<NodeId, NodeId>> stack{{0, kNoNode}};
    while (!stack.empty()) {
        const auto [u, new_parent] = stack.back();
        stack.pop_back();
        const NodeId id = out.add_node(nodes_[u].label, new_parent, nodes_[u].point);
        const auto& ch = nodes_[u].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
            stack.push_back({*it, id});
        }
    }
    return out;
}

std::string to_string(HstViolation::Kind kind) {
    switch (kind) {
        case HstViolation::Kind::leaf_label: return "leaf_label";
        case HstViolation::Kind::internal_label: return "internal_label";
        case HstViolation::Kind::separation: return "separation";
        case HstViolation::Kind::leaf_point: return "leaf_point";
    }
    return "unknown";
}

HstReport validate_hst(const UltraTree& t, double k) {
    if (!(k >= 1.0)) {
        throw ParameterError("validate_hst: k must be >= 1");
    }
    HstReport report;
    using K = HstViolation::Kind;
    for (NodeId u = 0; u < t.size(); ++u) {
        const auto& nd = t.node(u);
        if (nd.children.empty()) {
            if (nd.label != 0.0) report.violations.push_back({K::leaf_label, u, kNoNode});
            if (nd.point < 0 || nd.point >= t.source_n()) report.violations.push_back({K::leaf_point, u, kNoNode});
        } else {
            if (!(nd.label > 0.0)) report.violations.push_back({K::internal_label, u, kNoNode});
            for (NodeId c : nd.children) {
                if (!leq_tol(t.label(c) * k, nd.label)) {
                    report.violations.push_back({K::separation, u, c});
                }
            }
        }
    }
    return report;
}

namespace {

double round_up_power(double label, double k) {
    int e = static_cast<int>(std::ceil(std::log(label) / std::log(k)));
    while (std::pow(k, e) < label) ++e;
    while (std::pow(k, e - 1) >= label) --e;
    return std::pow(k, e);
}

}  // namespace

UltraTree to_khst(const UltraTree& t, double k) {
    if (!(k > 1.0)) {
        throw ParameterError("to_khst: k must be > 1");
    }
    if (!validate_hst(t, 1.0).ok()) {
        throw ParameterError("to_khst: input is not a valid ultrametric tree");
    }
    UltraTree out(k, t.source_n());
    if (t.empty()) {
        return out;
    }
    auto rounded = [&](NodeId u) { return t.is_leaf(u) ? 0.0 : round_up_power(t.label(u), k); };
    // Pre-order emission; a child whose rounded label equals its parent's is
    // spliced away and its children take its place in order.
    struct Frame {
        NodeId old_node;
        NodeId new_parent;
    };
    std::vector<Frame> stack{{t.root(), kNoNode}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const double lab = rounded(f.old_node);
        const NodeId id = out.add_node(lab, f.new_parent, t.is_leaf(f.old_node) ? t.point(f.old_node) : -1);
        std::vector<NodeId> kids;
        std::vector<NodeId> work(t.children(f.old_node).begin(), t.children(f.old_node).end());
        // Expand contracted chains, preserving left-to-right order.
        for (std::size_t i = 0; i < work.size();) {
            const NodeId c = work[i];
            if (!t.is_leaf(c) && rounded(c) == lab) {
                const auto& g = t.children(c);
                work.erase(work.begin() + static_cast<std::ptrdiff_t>(i));
                work.insert(work.begin() + static_cast<std::ptrdiff_t>(i), g.begin(), g.end());
            } else {
                kids.push_back(c);
                ++i;
            }
        }
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            stack.push_back({*it, id});
        }
    }
    return out;
}

}  // namespace pathembed
