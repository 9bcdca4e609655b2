#include <gtest/gtest.h>

#include <bit>

#include "gen.hpp"
#include "pathembed/errors.hpp"
#include "pathembed/metric.hpp"

using namespace pathembed;

TEST(Metric, PathDistances) {
    const MetricSpace m = from_graph(path_graph(5));
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) EXPECT_EQ(m(i, j), std::abs(i - j));
    }
    EXPECT_EQ(m.diameter(), 4.0);
    EXPECT_EQ(m.aspect_ratio(), 4.0);
    EXPECT_TRUE(m.integral());
}

TEST(Metric, CycleAndHypercube) {
    const MetricSpace c = from_graph(cycle_graph(6));
    EXPECT_EQ(c(0, 3), 3.0);
    EXPECT_EQ(c(0, 5), 1.0);
    const MetricSpace q = from_graph(hypercube_graph(4));
    ASSERT_EQ(q.size(), 16);
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) EXPECT_EQ(q(i, j), std::popcount(static_cast<unsigned>(i ^ j)));
    }
}

TEST(Metric, RandomRegularIsRegularConnectedAndSeeded) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = random_regular_graph(16, 3, seed);
        EXPECT_TRUE(g.connected());
        std::vector<int> deg(16, 0);
        for (const Edge& e : g.edges) {
            EXPECT_NE(e.u, e.v);
            ++deg[e.u];
            ++deg[e.v];
        }
        for (int d : deg) EXPECT_EQ(d, 3);
        const Graph again = random_regular_graph(16, 3, seed);
        ASSERT_EQ(g.edges.size(), again.edges.size());
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            EXPECT_EQ(g.edges[i].u, again.edges[i].u);
            EXPECT_EQ(g.edges[i].v, again.edges[i].v);
        }
    }
}

TEST(Metric, GeneratorErrors) {
    EXPECT_THROW(path_graph(0), ParameterError);
    EXPECT_THROW(cycle_graph(2), ParameterError);
    EXPECT_THROW(hypercube_graph(0), ParameterError);
    EXPECT_THROW(random_regular_graph(5, 3, 0), ParameterError);
    EXPECT_THROW(random_metric(0, 0), ParameterError);
    EXPECT_THROW(parse_generator_kind("torus"), ParameterError);
}

TEST(Metric, GeneratedMetricsAreValid) {
    for (int n : {1, 2, 8, 17}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            EXPECT_TRUE(validate(random_metric(n, seed)).ok());
        }
    }
    for (const auto& spec : testgen::specs_for(32, 4)) {
        EXPECT_TRUE(validate(generate_metric(spec)).ok()) << testgen::describe(spec);
    }
}

TEST(Metric, ValidateReportsEveryKind) {
    const MetricSpace bad(3, {1, 2, 9, 3, 0, 1, 9, 1, 0});
    const auto report = validate(bad);
    bool diag = false, sym = false, tri = false;
    for (const auto& v : report.violations) {
        diag = diag || v.kind == MetricViolation::Kind::zero_diagonal;
        sym = sym || v.kind == MetricViolation::Kind::symmetry;
        tri = tri || v.kind == MetricViolation::Kind::triangle;
    }
    EXPECT_TRUE(diag);
    EXPECT_TRUE(sym);
    EXPECT_TRUE(tri);
    const MetricSpace zero(2, {0, 0, 0, 0});
    ASSERT_FALSE(validate(zero).ok());
    EXPECT_EQ(validate(zero).violations.front().kind, MetricViolation::Kind::positivity);
    const MetricSpace inf(2, {0, INFINITY, INFINITY, 0});
    EXPECT_EQ(validate(inf).violations.front().kind, MetricViolation::Kind::non_finite);
    EXPECT_EQ(validate(bad, 1).violations.size(), 1u);
}

TEST(Metric, MatrixShapeChecked) {
    EXPECT_THROW(MetricSpace(2, {0, 1, 1}), InputError);
    EXPECT_THROW(MetricSpace(2, {0, 1, 1, 0}, {"a"}), InputError);
}

TEST(Metric, DisconnectedGraphHasInfiniteDistance) {
    Graph g{3, {{0, 1, 1.0}}, true};
    EXPECT_THROW(from_graph(g), InfiniteDistanceError);
    Graph loop{2, {{0, 0, 1.0}}, true};
    EXPECT_THROW(from_graph(loop), InputError);
    Graph neg{2, {{0, 1, -1.0}}, false};
    EXPECT_THROW(from_graph(neg), InputError);
}

TEST(Metric, AspectRatioOfSmallSpaces) {
    EXPECT_EQ(MetricSpace(1, {0}).aspect_ratio(), 1.0);
    EXPECT_EQ(MetricSpace(2, {0, 5, 5, 0}).aspect_ratio(), 1.0);
    EXPECT_EQ(MetricSpace(0, {}).diameter(), 0.0);
}

TEST(Metric, SubspaceRenumbers) {
    const MetricSpace m = from_graph(path_graph(6));
    const std::vector<int> pts{5, 1, 3};
    const MetricSpace s = m.subspace(pts);
    EXPECT_EQ(s(0, 1), 4.0);
    EXPECT_EQ(s(1, 2), 2.0);
}

TEST(Metric, DiameterAnchorHasSmallBall) {
    for (const auto& spec : testgen::specs_for(16, 1)) {
        const MetricSpace m = generate_metric(spec);
        const DiameterAnchor a = diameter_anchor(m);
        EXPECT_EQ(m(a.x, a.xbar), m.diameter());
        int inside = 0;
        for (int y = 0; y < m.size(); ++y) inside += 4 * m(a.x, y) < a.delta;
        EXPECT_LE(2 * inside, m.size()) << testgen::describe(spec);
    }
    EXPECT_THROW(diameter_anchor(MetricSpace(1, {0})), DegenerateInputError);
}

TEST(Metric, AnchorPrefersSmallerIndexOnTies) {
    const DiameterAnchor a = diameter_anchor(from_graph(path_graph(4)));
    EXPECT_EQ(a.x, 0);
    EXPECT_EQ(a.xbar, 3);
}

TEST(Metric, UnitDistanceGraphRoundTrips) {
    const Graph g = hypercube_graph(3);
    const Graph back = unit_distance_graph(from_graph(g));
    EXPECT_EQ(back.edges.size(), g.edges.size());
    EXPECT_TRUE(from_graph(back) == from_graph(g));
}

TEST(Metric, LeqTolIsRelative) {
    EXPECT_TRUE(leq_tol(1.0 + 1e-12, 1.0));
    EXPECT_FALSE(leq_tol(1.0 + 1e-6, 1.0));
    EXPECT_TRUE(leq_tol(1e12 + 100, 1e12));
    EXPECT_FALSE(leq_tol(1e12 + 1e4, 1e12));
}

TEST(Rng, DeterministicAndInRange) {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.uniform_int(-3, 7);
        EXPECT_EQ(x, b.uniform_int(-3, 7));
        EXPECT_GE(x, -3);
        EXPECT_LE(x, 7);
        const double u = a.uniform01();
        EXPECT_EQ(u, b.uniform01());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_NE(Rng::derived(1, 0).next(), Rng::derived(1, 1).next());
    EXPECT_EQ(Rng::derived(1, 5).next(), Rng::derived(1, 5).next());
}
