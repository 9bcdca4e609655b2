#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gen.hpp"
#include "pathembed/embed_tree.hpp"
#include "pathembed/errors.hpp"
#include "pathembed/realize.hpp"

using namespace pathembed;

TEST(StarTree, DistancesAndIds) {
    const StarTree t(4.0, 2, {{0, 1, 2}, {2, 1, 0}}, 3);
    EXPECT_EQ(t.node_count(), 7);
    EXPECT_EQ(t.node(1, 0), 4);
    EXPECT_EQ(t.path_of(0), -1);
    EXPECT_EQ(t.position_of(5), 1);
    EXPECT_EQ(t.point(6), 0);
    EXPECT_EQ(t.distance(1, 3), 2.0);
    // Across paths: (2 + 2) + (2 + 0), i.e. depth sum with delta/2 per side.
    EXPECT_EQ(t.distance(3, 4), 6.0);
    EXPECT_EQ(t.distance(0, 4), 2.0);
    EXPECT_EQ(t.fibers()[1], (std::vector<NodeId>{2, 5}));
    EXPECT_THROW(t.distance(0, 99), LookupError);
}

TEST(Walks, CountsAndHypercubeS) {
    EXPECT_EQ(walk_count(path_graph(2), 1), 2u);
    EXPECT_EQ(walk_count(hypercube_graph(3), 1), 24u);
    EXPECT_EQ(walk_count(hypercube_graph(4), 2), 16u * 16u);
    EXPECT_EQ(walk_count(path_graph(3), 2), 6u);
    EXPECT_EQ(walk_count(path_graph(4), 0), 4u);
    EXPECT_EQ(hypercube_s(2), 1);
    EXPECT_EQ(hypercube_s(3), 2);
    EXPECT_EQ(hypercube_s(4), 2);
    EXPECT_EQ(hypercube_s(5), 3);
    EXPECT_EQ(hypercube_s(8), 3);
}

TEST(PathStar, SingleEdge) {
    const MultiEmbedding me = build_path_star(path_graph(2), 1);
    const StarTree& t = me.star();
    EXPECT_EQ(t.path_count(), 2);
    EXPECT_EQ(t.node_count(), 5);
    EXPECT_EQ(t.paths()[0], (std::vector<int>{0, 1}));
    EXPECT_EQ(t.paths()[1], (std::vector<int>{1, 0}));
    EXPECT_EQ(t.delta(), 1.0);
    EXPECT_TRUE(audit_star(me).ok());
}

TEST(PathStar, HypercubeWalkCount) {
    const MultiEmbedding me = build_path_star(hypercube_graph(3), 1);
    EXPECT_EQ(me.star().path_count(), 24);
    const MultiEmbedding me2 = build_path_star(hypercube_graph(4), 2);
    EXPECT_EQ(me2.star().path_count(), 256);
    const StarAudit a = audit_star(me2);
    EXPECT_TRUE(a.ok());
    EXPECT_LE(a.node_count, a.size_bound);
}

TEST(PathStar, PathsAreLexicographicWalks) {
    const Graph g = cycle_graph(5);
    const MultiEmbedding me = build_path_star(g, 3);
    const auto& paths = me.star().paths();
    EXPECT_TRUE(std::is_sorted(paths.begin(), paths.end()));
    std::set<std::vector<int>> unique(paths.begin(), paths.end());
    EXPECT_EQ(unique.size(), paths.size());
    EXPECT_EQ(paths.size(), walk_count(g, 3));
    const MetricSpace m = from_graph(g);
    for (const auto& p : paths) {
        ASSERT_EQ(p.size(), 4u);
        for (std::size_t i = 1; i < p.size(); ++i) EXPECT_EQ(m(p[i - 1], p[i]), 1.0);
    }
}

TEST(PathStar, MetricInputMustBeUnitGraph) {
    EXPECT_NO_THROW(build_path_star(from_graph(hypercube_graph(3)), 2));
    EXPECT_THROW(build_path_star(random_metric(6, 1), 2), InputError);
    EXPECT_THROW(build_path_star(path_graph(3), 0), ParameterError);
    StarBuildOptions tiny;
    tiny.node_budget = 50;
    EXPECT_THROW(build_path_star(hypercube_graph(5), 3, tiny), BudgetError);
}

TEST(PathStar, OnePoint) {
    const MultiEmbedding me = build_path_star(path_graph(1), 2);
    EXPECT_EQ(me.star().path_count(), 1);
    EXPECT_EQ(me.fibers[0].size(), 1u);
}

TEST(StarRealize, SinglePoint) {
    const MultiEmbedding me = build_path_star(hypercube_graph(3), 2);
    const StarRealization r = realize_in_star(me, {5});
    EXPECT_EQ(r.path.seq.size(), 1u);
    EXPECT_EQ(r.path.length, 0.0);
}

TEST(StarRealize, WalkOfLengthSStaysOnOnePath) {
    const MultiEmbedding me = build_path_star(hypercube_graph(4), 2);
    const StarRealization r = realize_in_star(me, {0, 1, 3});
    EXPECT_EQ(r.chunks, 1);
    EXPECT_EQ(r.path.length, 2.0);
    EXPECT_EQ(me.star().path_of(r.path.seq.front()), me.star().path_of(r.path.seq.back()));
}

TEST(StarRealize, ChunkBoundOnFourEdges) {
    const MultiEmbedding me = build_path_star(hypercube_graph(4), 2);
    const PointPath p{0, 1, 3, 7, 15};
    const StarRealization r = realize_in_star(me, p);
    EXPECT_EQ(r.chunks, 2);
    EXPECT_EQ(r.chunk_bound, 2 * 4 + 4);
    EXPECT_EQ(r.ratio_bound, 16.0);
    EXPECT_LE(r.path.length, r.chunk_bound);
    check_representatives(me, p, r.path);
}

TEST(StarRealize, RandomWalksRespectBounds) {
    for (int h : {3, 4}) {
        const Graph g = hypercube_graph(h);
        const int s = hypercube_s(h);
        const MultiEmbedding me = build_path_star(g, s);
        Rng rng(h);
        for (int trial = 0; trial < 300; ++trial) {
            const PointPath p = sample_walk(me.source, static_cast<int>(rng.uniform_int(0, 20)), WalkMode::local, rng);
            const StarRealization r = realize_in_star(me, p);
            check_representatives(me, p, r.path);
            ASSERT_DOUBLE_EQ(r.path.length, rep_length(me, r.path.seq));
            ASSERT_TRUE(leq_tol(r.path.length, r.chunk_bound));
            if (r.source_length >= s) ASSERT_TRUE(leq_tol(r.path.length, r.ratio_bound));
            ASSERT_TRUE(leq_tol(optimal_rep_path(me, p).length, r.path.length));
            ASSERT_TRUE(leq_tol(r.source_length, optimal_rep_path(me, p).length));
        }
    }
}

TEST(StarRealize, RejectsNonWalks) {
    const MultiEmbedding me = build_path_star(path_graph(4), 1);
    EXPECT_THROW(realize_in_star(me, {0, 2}), InputError);
    EXPECT_THROW(realize_in_star(me, {}), InputError);
}

TEST(StarAudit, NonContractiveOnRegularGraphs) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Graph g = random_regular_graph(12, 3, seed);
        const MultiEmbedding me = build_path_star(g, 2);
        const StarAudit a = audit_star(me);
        EXPECT_TRUE(a.ok()) << (a.violations.empty() ? "" : a.violations.front());
        EXPECT_TRUE(contracted_pairs(me).empty());
        EXPECT_DOUBLE_EQ(a.walk_bound, 12 * 9);
    }
}

TEST(StarAudit, SampledPairsOnLargeStars) {
    const MultiEmbedding me = build_path_star(hypercube_graph(5), 3);
    const StarAudit a = audit_star(me, 5000, 3);
    EXPECT_TRUE(a.ok());
    EXPECT_FALSE(a.exhaustive_pairs);
    EXPECT_EQ(a.pairs_checked, 5000u);
}
