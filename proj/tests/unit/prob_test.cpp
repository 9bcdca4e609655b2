#include <gtest/gtest.h>

#include "gen.hpp"
#include "pathembed/embed_ultra.hpp"
#include "pathembed/errors.hpp"
#include "pathembed/prob.hpp"

using namespace pathembed;

TEST(SampleTree, OnePoint) {
    const UltraTree t = sample_tree_embedding(MetricSpace(1, {0}), 3);
    EXPECT_EQ(t.leaf_count(), 1);
    EXPECT_EQ(t.size(), 1);
}

TEST(SampleTree, TwoPointsAtDistanceFive) {
    const UltraTree t = sample_tree_embedding(MetricSpace(2, {0, 5, 5, 0}), 7);
    EXPECT_EQ(t.leaf_count(), 2);
    EXPECT_GE(t.label(t.root()), 5.0);
    const auto f = t.fibers();
    EXPECT_GE(t.distance(f[0][0], f[1][0]), 5.0);
}

TEST(SampleTree, NonContractiveUltrametricsWithOneLeafPerPoint) {
    for (const auto& spec : testgen::specs_for(32, 2)) {
        const MetricSpace m = generate_metric(spec);
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const UltraTree t = sample_tree_embedding(m, seed);
            ASSERT_EQ(t.leaf_count(), m.size());
            ASSERT_TRUE(validate_hst(t, 1.0).ok());
            const MultiEmbedding me = make_embedding(m, t, EmbeddingParams{});
            ASSERT_TRUE(contracted_pairs(me).empty()) << testgen::describe(spec) << " seed " << seed;
            for (const auto& f : me.fibers) ASSERT_EQ(f.size(), 1u);
            // Labels are cluster diameters: the root is exactly the diameter.
            ASSERT_DOUBLE_EQ(t.label(t.root()), m.diameter());
        }
    }
}

TEST(SampleTree, Seeded) {
    const MetricSpace m = random_metric(20, 5);
    const UltraTree a = sample_tree_embedding(m, 11);
    const UltraTree b = sample_tree_embedding(m, 11);
    ASSERT_EQ(a.size(), b.size());
    for (NodeId u = 0; u < a.size(); ++u) {
        EXPECT_EQ(a.label(u), b.label(u));
        EXPECT_EQ(a.parent(u), b.parent(u));
        EXPECT_EQ(a.point(u), b.point(u));
    }
}

TEST(Samples, JobsDoNotChangeResult) {
    const MetricSpace m = random_metric(24, 1);
    const EmbeddingSample a = sample_embeddings(m, 6, 40, 1);
    const EmbeddingSample b = sample_embeddings(m, 6, 40, 3);
    EXPECT_EQ(a.seeds, b.seeds);
    ASSERT_EQ(a.trees.size(), 6u);
    for (std::size_t i = 0; i < a.trees.size(); ++i) {
        const auto fa = a.trees[i].fibers(), fb = b.trees[i].fibers();
        for (int x = 0; x < m.size(); ++x) {
            for (int y = 0; y < m.size(); ++y) ASSERT_EQ(a.trees[i].distance(fa[x][0], fa[y][0]), b.trees[i].distance(fb[x][0], fb[y][0]));
        }
    }
    EXPECT_THROW(sample_embeddings(m, 0, 1), ParameterError);
    EXPECT_THROW(sample_embeddings(m, 2, 1, 0), ParameterError);
}

TEST(Union, OneTreeUnderTrivialRoot) {
    const MetricSpace m = random_metric(6, 3);
    const MultiEmbedding u = union_under_root(m, sample_embeddings(m, 1, 2));
    EXPECT_EQ(u.ultra().leaf_count(), 6);
    for (const auto& f : u.fibers) EXPECT_EQ(f.size(), 1u);
    EXPECT_TRUE(contracted_pairs(u).empty());
}

TEST(Union, TwoCopiesOfTwoPointTree) {
    const MetricSpace m(2, {0, 5, 5, 0});
    EmbeddingSample s;
    const UltraTree t = sample_tree_embedding(m, 0);
    s.trees = {t, t};
    s.seeds = {0, 0};
    const MultiEmbedding u = union_under_root(m, s);
    EXPECT_EQ(u.ultra().leaf_count(), 4);
    EXPECT_EQ(u.fibers[0].size(), 2u);
    EXPECT_EQ(u.fibers[1].size(), 2u);
    EXPECT_TRUE(contracted_pairs(u).empty());
}

TEST(Union, EightSamplesOverSixteen) {
    const MetricSpace m = random_metric(16, 9);
    const MultiEmbedding u = union_under_root(m, sample_embeddings(m, 8, 1));
    EXPECT_EQ(u.ultra().leaf_count(), 128);
    EXPECT_TRUE(contracted_pairs(u).empty());
    EXPECT_TRUE(validate_hst(u.ultra(), 1.0).ok());
}

TEST(Union, Errors) {
    const MetricSpace m = random_metric(6, 3);
    EmbeddingSample mixed;
    mixed.trees = {sample_tree_embedding(m, 0), sample_tree_embedding(random_metric(5, 1), 0)};
    mixed.seeds = {0, 0};
    EXPECT_THROW(union_under_root(m, mixed), InputError);
    EXPECT_THROW(union_under_root(m, EmbeddingSample{}), InputError);
    const MetricSpace one(1, {0});
    EXPECT_THROW(union_under_root(one, sample_embeddings(one, 2, 0)), InputError);
    EXPECT_NO_THROW(union_under_root(one, sample_embeddings(one, 1, 0)));
}
