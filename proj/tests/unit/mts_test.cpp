#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "pathembed/embed_tree.hpp"
#include "pathembed/embed_ultra.hpp"
#include "pathembed/errors.hpp"
#include "pathembed/mts.hpp"

using namespace pathembed;

TEST(MtsCost, Saturation) {
    EXPECT_EQ(cap_cost(INFINITY), kMtsInfinity);
    EXPECT_EQ(cap_cost(5.0), 5.0);
    EXPECT_EQ(cap_cost(2e12), kMtsInfinity);
    EXPECT_EQ(sat_add(kMtsInfinity, 3.0), kMtsInfinity);
    EXPECT_EQ(sat_add(1.0, 2.0), 3.0);
}

TEST(MtsInstance, Validation) {
    const MetricSpace m = from_graph(path_graph(3));
    EXPECT_NO_THROW(make_mts_instance(m, {{0, 1, 2}}));
    EXPECT_THROW(make_mts_instance(m, {{0, 1}}), InputError);
    EXPECT_THROW(make_mts_instance(m, {{0, -1, 2}}), InputError);
    EXPECT_THROW(make_mts_instance(m, {{0, 1, 2}}, 3), InputError);
}

TEST(MtsInstance, InfiniteCostsAreCapped) {
    const MtsInstance inst = make_mts_instance(from_graph(path_graph(2)), {{INFINITY, 0.0}});
    EXPECT_EQ(inst.tasks[0][0], kMtsInfinity);
}

TEST(Schedule, CostCountsMovesAndService) {
    const MtsInstance inst = make_mts_instance(from_graph(path_graph(4)), {{5, 5, 0, 5}, {0, 9, 9, 9}});
    EXPECT_EQ(schedule_cost(inst, {2, 0}), 2.0 + 0.0 + 2.0 + 0.0);
    EXPECT_EQ(schedule_cost(inst, {0, 0}), 5.0);
}

TEST(OfflineOpt, HandExample) {
    const MtsInstance inst = make_mts_instance(from_graph(path_graph(4)), {{5, 5, 0, 5}, {0, 9, 9, 9}});
    const Schedule s = offline_opt(inst);
    EXPECT_EQ(s.cost, 4.0);
    EXPECT_EQ(s.states, (std::vector<int>{2, 0}));
    EXPECT_TRUE(s.feasible());
}

TEST(OfflineOpt, MatchesBruteForce) {
    Rng rng(3);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 5));
        const int m = static_cast<int>(rng.uniform_int(0, 5));
        const MetricSpace sp = testgen::random_integral_metric(n, 6, rng);
        const MtsInstance inst =
            make_mts_instance(sp, testgen::random_tasks(n, m, 8, 0.2, rng), static_cast<int>(rng.index(n)));
        const Schedule s = offline_opt(inst);
        ASSERT_DOUBLE_EQ(s.cost, testgen::brute_force_mts(inst));
        ASSERT_EQ(s.states.size(), inst.tasks.size());
        if (s.feasible()) ASSERT_DOUBLE_EQ(schedule_cost(inst, s.states), s.cost);
    }
}

TEST(OfflineOpt, AllForbiddenIsInfeasible) {
    const MtsInstance inst = make_mts_instance(from_graph(path_graph(2)), {{INFINITY, INFINITY}});
    EXPECT_FALSE(offline_opt(inst).feasible());
    EXPECT_FALSE(wfa_online(inst).feasible());
}

TEST(Wfa, NeverBelowOptimumAndFeasibleWhenPossible) {
    Rng rng(5);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 7));
        const MetricSpace sp = testgen::random_integral_metric(n, 5, rng);
        const MtsInstance inst = make_mts_instance(sp, testgen::random_tasks(n, 12, 6, 0.3, rng));
        const Schedule opt = offline_opt(inst);
        const Schedule on = wfa_online(inst);
        ASSERT_TRUE(leq_tol(opt.cost, on.cost));
        ASSERT_EQ(opt.feasible(), on.feasible());
        if (on.feasible()) ASSERT_DOUBLE_EQ(schedule_cost(inst, on.states), on.cost);
        // Competitive ratio of the work-function algorithm: 2n - 1.
        if (opt.feasible() && opt.cost > 0) ASSERT_LE(on.cost, (2.0 * n - 1.0) * opt.cost + 2.0 * n * sp.diameter());
    }
}

TEST(Reduce, TasksPullBackThroughFibers) {
    const MetricSpace m = from_graph(path_graph(8));
    const MultiEmbedding me = build_ultrametric_embedding(m, 2);
    Rng rng(1);
    const MtsInstance inst = make_mts_instance(m, testgen::random_tasks(8, 4, 5, 0.1, rng), 3);
    const ReducedMts r = reduce_tasks(me, inst);
    ASSERT_EQ(r.instance.space.size(), me.target_size());
    EXPECT_EQ(r.state_point[r.instance.start], 3);
    EXPECT_EQ(r.state_node[r.instance.start], me.fibers[3][0]);
    for (int u = 0; u < r.instance.space.size(); ++u) {
        for (std::size_t i = 0; i < inst.tasks.size(); ++i) ASSERT_EQ(r.instance.tasks[i][u], inst.tasks[i][r.state_point[u]]);
    }
}

TEST(Experiment, TargetOptWithinAlphaAndProjectionHelps) {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 10));
        const MetricSpace m = testgen::random_integral_metric(n, 6, rng);
        const MultiEmbedding me = build_ultrametric_embedding(m, static_cast<int>(rng.uniform_int(1, 2)));
        const MtsInstance inst = make_mts_instance(m, testgen::random_tasks(n, 10, 6, 0.1, rng));
        const MtsReport r = run_experiment(me, inst);
        ASSERT_TRUE(r.holds);
        ASSERT_TRUE(leq_tol(r.source_opt, r.target_opt));
        ASSERT_TRUE(leq_tol(r.target_opt, r.alpha_bound * r.source_opt));
        ASSERT_TRUE(leq_tol(r.projected_online, r.target_online));
        ASSERT_TRUE(leq_tol(r.source_opt, r.projected_online));
        EXPECT_EQ(r.projected_states.size(), inst.tasks.size());
    }
}

TEST(Experiment, StarTarget) {
    const Graph g = hypercube_graph(3);
    const MultiEmbedding me = build_path_star(g, 2);
    Rng rng(2);
    const MtsInstance inst = make_mts_instance(from_graph(g), testgen::random_tasks(8, 15, 4, 0.0, rng));
    const MtsReport r = run_experiment(me, inst);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.empirical_ratio, 1.0);
}
