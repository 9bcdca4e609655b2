#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "pathembed/embed_tree.hpp"
#include "pathembed/embed_ultra.hpp"
#include "pathembed/errors.hpp"
#include "pathembed/prob.hpp"
#include "pathembed/realize.hpp"

using namespace pathembed;

namespace {

MultiEmbedding path_embedding(int n, int t) {
    return build_ultrametric_embedding(from_graph(path_graph(n)), t);
}

}  // namespace

TEST(Realize, SinglePointPath) {
    const MultiEmbedding me = path_embedding(8, 1);
    const RepPath r = realize_path(me, {3});
    EXPECT_EQ(r.seq.size(), 1u);
    EXPECT_EQ(r.length, 0.0);
    EXPECT_EQ(optimal_rep_path(me, {3}).length, 0.0);
}

TEST(Realize, RepeatedPointCostsNothing) {
    const MultiEmbedding me = path_embedding(16, 2);
    const RepPath r = optimal_rep_path(me, {4, 4, 4});
    EXPECT_EQ(r.length, 0.0);
    EXPECT_EQ(r.seq[0], r.seq[1]);
}

TEST(Realize, TwoPointsAtDistanceFive) {
    const MultiEmbedding me = build_ultrametric_embedding(MetricSpace(2, {0, 5, 5, 0}), 1);
    EXPECT_EQ(realize_path(me, {0, 1, 0}).length, 10.0);
    EXPECT_EQ(optimal_rep_path(me, {0, 1, 0}).length, 10.0);
}

TEST(Realize, RealizedWithinBoundAndAboveOptimal) {
    for (const auto& spec : testgen::specs_for(32, 5)) {
        const MetricSpace m = generate_metric(spec);
        for (int t : {1, 2, 3}) {
            const MultiEmbedding me = build_ultrametric_embedding(m, t);
            Rng rng(t * 100 + m.size());
            for (int trial = 0; trial < 60; ++trial) {
                const PointPath p = trial % 3 == 0 ? testgen::random_point_path(m.size(), 10, rng)
                                                   : sample_walk(m, 12, WalkMode::local, rng);
                const RepPath r = realize_path(me, p, t);
                check_representatives(me, p, r);
                ASSERT_DOUBLE_EQ(r.length, rep_length(me, r.seq));
                ASSERT_TRUE(leq_tol(r.length, realization_bound(me, p))) << testgen::describe(spec);
                const RepPath o = optimal_rep_path(me, p);
                check_representatives(me, p, o);
                ASSERT_TRUE(leq_tol(o.length, r.length));
                ASSERT_TRUE(leq_tol(path_length(m, p), o.length));
            }
        }
    }
}

TEST(Realize, TMismatchIsParameterError) {
    const MultiEmbedding me = path_embedding(8, 2);
    EXPECT_THROW(realize_path(me, {0, 1}, 1), ParameterError);
    EXPECT_THROW(realize_path(me, {0, 9}), InputError);
    EXPECT_THROW(optimal_rep_path(me, {}), InputError);
}

TEST(Realize, BoundFormula) {
    const MultiEmbedding me = path_embedding(16, 2);
    // 8 * 2 * log2(min{16, 15}) * 15
    EXPECT_NEAR(realization_bound(me, {0, 15}), 16.0 * std::log2(15.0) * 15.0, 1e-9);
    EXPECT_EQ(alpha_bound(2, 1.0, 3), 1.0);
    EXPECT_EQ(alpha_bound(1, 1.0, 1), 1.0);
    EXPECT_DOUBLE_EQ(alpha_bound(64, 1000.0, 1), 48.0);
}

TEST(OptimalRep, AncestorDpMatchesPairwiseAndBruteForce) {
    Rng rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 24));
        const MetricSpace m = testgen::random_integral_metric(n, 12, rng);
        const int t = static_cast<int>(rng.uniform_int(1, 3));
        const MultiEmbedding me = build_ultrametric_embedding(m, t);
        for (int q = 0; q < 10; ++q) {
            const PointPath p = testgen::random_point_path(n, static_cast<int>(rng.uniform_int(1, 7)), rng);
            const RepPath a = optimal_rep_path(me, p);
            const RepPath b = optimal_rep_path_pairwise(me, p);
            ASSERT_EQ(a.length, b.length);
            ASSERT_EQ(a.seq, b.seq);
            if (testgen::fiber_product(me, p) <= 2e4) ASSERT_EQ(a.length, testgen::brute_force_rep_path(me, p));
        }
    }
}

TEST(OptimalRep, StarDpMatchesPairwise) {
    for (int h : {3, 4}) {
        const MultiEmbedding me = build_path_star(hypercube_graph(h), 2);
        Rng rng(h + 40);
        for (int q = 0; q < 40; ++q) {
            const PointPath p = testgen::random_point_path(me.source.size(), static_cast<int>(rng.uniform_int(1, 6)), rng);
            const RepPath a = optimal_rep_path(me, p);
            const RepPath b = optimal_rep_path_pairwise(me, p);
            ASSERT_EQ(a.length, b.length);
            ASSERT_EQ(a.seq, b.seq);
        }
    }
}

TEST(OptimalRep, NonMonotoneTreeUsesPairwise) {
    // Child label above its parent: not an ultrametric, but the DP must stay exact.
    UltraTree t(1.0, 3);
    t.add_node(1.0, kNoNode);
    const NodeId a = t.add_node(6.0, 0);
    t.add_node(0.0, a, 0);
    t.add_node(0.0, a, 1);
    t.add_node(0.0, 0, 2);
    t.add_node(0.0, 0, 0);
    const MultiEmbedding me = make_embedding(from_graph(path_graph(3)), std::move(t), EmbeddingParams{});
    const PointPath p{0, 1, 2, 0};
    EXPECT_EQ(optimal_rep_path(me, p).length, testgen::brute_force_rep_path(me, p));
}

TEST(OptimalRep, UnionNeverWorseThanItsTrees) {
    const MetricSpace m = random_metric(12, 2);
    const EmbeddingSample s = sample_embeddings(m, 4, 77);
    const MultiEmbedding u = union_under_root(m, s);
    Rng rng(1);
    for (int q = 0; q < 30; ++q) {
        const PointPath p = sample_walk(m, 8, WalkMode::uniform, rng);
        for (const auto& tree : s.trees) {
            const MultiEmbedding single = make_embedding(m, tree, EmbeddingParams{});
            EXPECT_TRUE(leq_tol(optimal_rep_path(u, p).length, optimal_rep_path(single, p).length));
        }
    }
}

TEST(Sampler, WalksAreLocalAndSeeded) {
    const MetricSpace m = from_graph(cycle_graph(10));
    Rng a(5), b(5);
    const PointPath p = sample_walk(m, 30, WalkMode::local, a);
    EXPECT_EQ(p, sample_walk(m, 30, WalkMode::local, b));
    ASSERT_EQ(p.size(), 31u);
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_EQ(m(p[i - 1], p[i]), 1.0);
    Rng c(6);
    const PointPath u = sample_walk(m, 30, WalkMode::uniform, c);
    for (std::size_t i = 1; i < u.size(); ++i) EXPECT_NE(u[i - 1], u[i]);
    EXPECT_EQ(parse_walk_mode("uniform"), WalkMode::uniform);
    EXPECT_THROW(parse_walk_mode("lazy"), InputError);
}

TEST(Sampler, SweepOrdersByAnchorDistance) {
    const MetricSpace m = from_graph(path_graph(6));
    EXPECT_EQ(sweep_path(m), (PointPath{0, 1, 2, 3, 4, 5}));
}

TEST(Stats, DeterministicAcrossJobCounts) {
    const MultiEmbedding me = build_ultrametric_embedding(random_metric(20, 4), 2);
    SamplerSpec spec;
    spec.mode = WalkMode::uniform;
    const DistortionStats a = distortion_stats(me, spec, 25, 9, 1);
    const DistortionStats b = distortion_stats(me, spec, 25, 9, 3);
    EXPECT_EQ(stats_csv(a), stats_csv(b));
    EXPECT_EQ(a.records.size(), 26u);
    EXPECT_EQ(a.violations, 0);
    EXPECT_LE(a.max_ratio_realized, a.bound);
    EXPECT_LE(a.max_ratio_optimal, a.max_ratio_realized);
    EXPECT_GE(a.mean_ratio, 1.0);
}

TEST(Stats, CsvShape) {
    const MultiEmbedding me = path_embedding(4, 1);
    SamplerSpec spec;
    spec.steps = 2;
    spec.sweep = false;
    const std::string csv = stats_csv(distortion_stats(me, spec, 2, 0));
    EXPECT_EQ(csv.rfind("trial,path_len,realized,optimal\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Stats, ProbTargetHasNoRealization) {
    const MetricSpace m = random_metric(10, 1);
    const MultiEmbedding u = union_under_root(m, sample_embeddings(m, 2, 3));
    const DistortionStats st = distortion_stats(u, SamplerSpec{}, 5, 1);
    EXPECT_TRUE(std::isnan(st.max_ratio_realized));
    EXPECT_TRUE(std::isnan(st.records.front().realized));
    EXPECT_NE(stats_csv(st).find(",,"), std::string::npos);
}

TEST(Stats, StarTargetsChecked) {
    const MultiEmbedding me = build_path_star(hypercube_graph(4), 2);
    const DistortionStats st = distortion_stats(me, SamplerSpec{}, 30, 4);
    EXPECT_EQ(st.violations, 0);
    EXPECT_DOUBLE_EQ(st.bound, 4.0);
    EXPECT_LE(st.max_ratio_realized, 4.0);
}

TEST(LowerBound, PathSweeps) {
    for (int n : {2, 4, 8, 16, 32}) {
        for (int t : {1, 2}) {
            const LowerBoundReport r = lower_bound_check(path_embedding(n, t));
            EXPECT_TRUE(r.holds) << n;
            EXPECT_GE(r.optimal, r.required);
            EXPECT_DOUBLE_EQ(r.required, n / 2.0 * std::log2(n));
        }
    }
    EXPECT_THROW(lower_bound_check(build_ultrametric_embedding(random_metric(4, 1), 1)), InputError);
}
