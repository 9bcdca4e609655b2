#include <gtest/gtest.h>

#include <thread>

#include "gen.hpp"
#include "pathembed/errors.hpp"
#include "pathembed/ultrametric.hpp"

using namespace pathembed;

namespace {

// Random tree: node i > 0 hangs below a uniform earlier internal node.
UltraTree random_tree(int nodes, int points, Rng& rng) {
    UltraTree t(1.0, points);
    t.add_node(100.0, kNoNode);
    std::vector<NodeId> internal{0};
    for (int i = 1; i < nodes; ++i) {
        const NodeId parent = internal[rng.index(internal.size())];
        const bool leaf = rng.uniform01() < 0.5;
        const double label = leaf ? 0.0 : t.label(parent) * rng.uniform_real(0.3, 1.0);
        const NodeId id = t.add_node(label, parent, leaf ? static_cast<int>(rng.index(points)) : -1);
        if (!leaf) internal.push_back(id);
    }
    // Internal nodes left childless become leaves.
    for (NodeId u = 0; u < t.size(); ++u) {
        if (t.is_leaf(u) && t.point(u) < 0) {
            t.set_label(u, 0.0);
            t.set_point(u, static_cast<int>(rng.index(points)));
        }
    }
    return t;
}

NodeId naive_lca(const UltraTree& t, NodeId a, NodeId b) {
    std::vector<NodeId> up;
    for (NodeId u = a; u != kNoNode; u = t.parent(u)) up.push_back(u);
    for (NodeId u = b; u != kNoNode; u = t.parent(u)) {
        if (std::find(up.begin(), up.end(), u) != up.end()) return u;
    }
    return kNoNode;
}

UltraTree cherry() {
    UltraTree t(1.0, 3);
    t.add_node(4.0, kNoNode);
    const NodeId left = t.add_node(2.0, 0);
    t.add_node(0.0, left, 0);
    t.add_node(0.0, left, 1);
    t.add_node(0.0, 0, 2);
    return t;
}

}  // namespace

TEST(UltraTree, CherryDistances) {
    const UltraTree t = cherry();
    EXPECT_EQ(t.leaf_count(), 3);
    EXPECT_EQ(t.distance(2, 3), 2.0);
    EXPECT_EQ(t.distance(2, 4), 4.0);
    EXPECT_EQ(t.distance(3, 3), 0.0);
    EXPECT_EQ(t.lca(2, 3), 1);
    EXPECT_EQ(t.depth(3), 2);
    EXPECT_EQ(t.height(), 2);
    const auto f = t.fibers();
    EXPECT_EQ(f[2], std::vector<NodeId>{4});
    EXPECT_TRUE(validate_hst(t, 2.0).ok());
    EXPECT_FALSE(validate_hst(t, 2.5).ok());
}

TEST(UltraTree, LookupErrors) {
    const UltraTree t = cherry();
    EXPECT_THROW(t.distance(0, 2), LookupError);
    EXPECT_THROW(t.lca(0, 99), LookupError);
    UltraTree u(1.0, 1);
    u.add_node(0.0, kNoNode, 0);
    EXPECT_THROW(u.add_node(0.0, kNoNode, 0), InputError);
    EXPECT_THROW(u.add_node(0.0, 5, 0), LookupError);
}

TEST(UltraTree, LcaMatchesNaiveWalk) {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const UltraTree t = random_tree(static_cast<int>(rng.uniform_int(1, 120)), 10, rng);
        for (int q = 0; q < 200; ++q) {
            const NodeId a = static_cast<NodeId>(rng.index(t.size()));
            const NodeId b = static_cast<NodeId>(rng.index(t.size()));
            ASSERT_EQ(t.lca(a, b), naive_lca(t, a, b));
        }
    }
}

TEST(UltraTree, IndexRebuiltAfterMutation) {
    UltraTree t = cherry();
    EXPECT_EQ(t.distance(2, 4), 4.0);
    const NodeId extra = t.add_node(0.0, 1, 2);
    EXPECT_EQ(t.distance(extra, 2), 2.0);
    UltraTree copy = t;
    EXPECT_EQ(copy.distance(extra, 4), 4.0);
}

TEST(UltraTree, ConcurrentQueriesAgree) {
    Rng rng(11);
    const UltraTree t = random_tree(400, 20, rng);
    const auto leaves = t.leaves();
    std::vector<double> expected;
    for (std::size_t i = 0; i + 1 < leaves.size(); ++i) expected.push_back(t.label(naive_lca(t, leaves[i], leaves[i + 1])));
    const UltraTree fresh = t;
    std::vector<int> mismatches(4, 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = 0; i + 1 < leaves.size(); ++i) {
                if (fresh.distance(leaves[i], leaves[i + 1]) != expected[i]) ++mismatches[w];
            }
        });
    }
    for (auto& th : pool) th.join();
    for (int m : mismatches) EXPECT_EQ(m, 0);
}

TEST(UltraTree, CanonicalIsPreorder) {
    UltraTree t(1.0, 2);
    t.add_node(5.0, kNoNode);
    const NodeId a = t.add_node(2.0, 0);
    t.add_node(0.0, 0, 1);
    t.add_node(0.0, a, 0);
    t.add_node(0.0, a, 1);
    const UltraTree c = t.canonical();
    EXPECT_EQ(c.label(1), 2.0);
    EXPECT_EQ(c.point(2), 0);
    EXPECT_EQ(c.point(3), 1);
    EXPECT_EQ(c.point(4), 1);
    EXPECT_EQ(c.distance(2, 4), 5.0);
}

TEST(UltraTree, ValidateFlagsBadLabels) {
    UltraTree t(1.0, 2);
    t.add_node(1.0, kNoNode);
    const NodeId mid = t.add_node(3.0, 0);
    t.add_node(1.0, mid, 0);
    t.add_node(0.0, mid, 7);
    const auto r = validate_hst(t, 1.0);
    int sep = 0, leaf_label = 0, leaf_point = 0;
    for (const auto& v : r.violations) {
        sep += v.kind == HstViolation::Kind::separation;
        leaf_label += v.kind == HstViolation::Kind::leaf_label;
        leaf_point += v.kind == HstViolation::Kind::leaf_point;
    }
    EXPECT_EQ(sep, 1);
    EXPECT_EQ(leaf_label, 1);
    EXPECT_EQ(leaf_point, 1);
    EXPECT_THROW(validate_hst(t, 0.5), ParameterError);
}

TEST(UltraTree, ToKhstRoundsUpAndContracts) {
    UltraTree t(1.0, 4);
    t.add_node(7.0, kNoNode);
    const NodeId a = t.add_node(5.0, 0);
    const NodeId b = t.add_node(1.5, 0);
    t.add_node(0.0, a, 0);
    t.add_node(0.0, a, 1);
    t.add_node(0.0, b, 2);
    t.add_node(0.0, b, 3);
    const UltraTree k = to_khst(t, 2.0);
    EXPECT_TRUE(validate_hst(k, 2.0).ok());
    EXPECT_EQ(k.label(0), 8.0);
    // 5 rounds to 8 and is spliced into the root.
    EXPECT_EQ(k.children(0).size(), 3u);
    const auto f = k.fibers();
    EXPECT_EQ(k.distance(f[0][0], f[1][0]), 8.0);
    EXPECT_EQ(k.distance(f[2][0], f[3][0]), 2.0);
    EXPECT_THROW(to_khst(t, 1.0), ParameterError);
}

TEST(UltraTree, ToKhstNeverContracts) {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const UltraTree t = random_tree(60, 8, rng).canonical();
        const UltraTree k = to_khst(t, 3.0);
        ASSERT_TRUE(validate_hst(k, 3.0).ok());
        const auto a = t.fibers(), b = k.fibers();
        for (int x = 0; x < 8; ++x) {
            for (int y = 0; y < 8; ++y) {
                if (a[x].empty() || a[y].empty()) continue;
                ASSERT_EQ(a[x].size(), b[x].size());
                for (std::size_t i = 0; i < a[x].size(); ++i) {
                    for (std::size_t j = 0; j < a[y].size(); ++j) {
                        const double before = t.distance(a[x][i], a[y][j]);
                        const double after = k.distance(b[x][i], b[y][j]);
                        ASSERT_LE(before, after);
                        ASSERT_LE(after, 3.0 * before);
                    }
                }
            }
        }
    }
}
