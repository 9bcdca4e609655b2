#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace pathembed {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

/*
 * Rooted labeled tree whose leaves carry source point ids. The leaf distance
 * Delta(lca(a, b)) defines an ultrametric (k = 1) or a k-HST.
 *
 * Nodes are appended with add_node(); node 0 is the root. Distance queries use
 * an Euler tour + sparse table built on first query; the build is guarded by
 * std::call_once, so concurrent queries never observe a partial index. Any
 * mutation drops the index.
 */
class UltraTree {
public:
    struct Node {
        double label = 0.0;
        NodeId parent = kNoNode;
        std::vector<NodeId> children;
        int point = -1;  // source point for leaves, -1 for internal nodes
    };

    UltraTree() = default;
    UltraTree(double k, int source_n) : k_(k), source_n_(source_n) {}
    UltraTree(const UltraTree& other);
    UltraTree& operator=(const UltraTree& other);
    UltraTree(UltraTree&&) noexcept = default;
    UltraTree& operator=(UltraTree&&) noexcept = default;

    // Appends a node under `parent` (kNoNode only for the first node).
    NodeId add_node(double label, NodeId parent, int point = -1);
    void set_label(NodeId u, double label);
    void set_point(NodeId leaf, int point);

    double k() const { return k_; }
    void set_k(double k) { k_ = k; }
    int source_n() const { return source_n_; }

    int size() const { return static_cast<int>(nodes_.size()); }
    bool empty() const { return nodes_.empty(); }
    NodeId root() const { return nodes_.empty() ? kNoNode : 0; }
    const Node& node(NodeId u) const { return nodes_.at(u); }
    double label(NodeId u) const { return nodes_.at(u).label; }
    bool is_leaf(NodeId u) const { return nodes_.at(u).children.empty(); }
    const std::vector<NodeId>& children(NodeId u) const { return nodes_.at(u).children; }
    NodeId parent(NodeId u) const { return nodes_.at(u).parent; }
    int point(NodeId leaf) const { return nodes_.at(leaf).point; }

    // Leaves in increasing node id order.
    std::vector<NodeId> leaves() const;
    int leaf_count() const;
    // For each source point, its leaves in increasing id order.
    std::vector<std::vector<NodeId>> fibers() const;

    NodeId lca(NodeId a, NodeId b) const;
    // Delta(lca(a, b)); throws LookupError unless both are leaves.
    double distance(NodeId a, NodeId b) const;
    int depth(NodeId u) const;
    int height() const;

    // Forces the LCA index now (e.g. before sharing across threads).
    void build_index() const;

    // Copy renumbered so ids follow a pre-order walk (children in order).
    UltraTree canonical() const;

private:
    struct LcaIndex {
        std::vector<NodeId> euler;
        std::vector<int> euler_depth;
        std::vector<int> first;
        std::vector<int> depth;
        std::vector<std::vector<int>> table;  // table[j][i]: argmin of euler_depth over [i, i + 2^j)
    };
    struct LazyIndex {
        std::once_flag once;
        std::unique_ptr<LcaIndex> index;
    };

    const LcaIndex& index() const;
    void invalidate() { lazy_ = std::make_unique<LazyIndex>(); }

    double k_ = 1.0;
    int source_n_ = 0;
    std::vector<Node> nodes_;
    mutable std::unique_ptr<LazyIndex> lazy_ = std::make_unique<LazyIndex>();
};

struct HstViolation {
    enum class Kind { leaf_label, internal_label, separation, leaf_point };
    Kind kind;
    NodeId parent = kNoNode;
    NodeId child = kNoNode;
};

std::string to_string(HstViolation::Kind kind);

struct HstReport {
    std::vector<HstViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Every label and parent/child separation violation of the k-HST definition,
// plus leaves whose point id is outside [0, source_n).
HstReport validate_hst(const UltraTree& t, double k);

// Rounds internal labels up to powers of k and contracts equal-label chains.
UltraTree to_khst(const UltraTree& t, double k);

}  // namespace pathembed
