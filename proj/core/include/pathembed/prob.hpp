#pragma once

#include <cstdint>
#include <vector>

#include "pathembed/embedding.hpp"
#include "pathembed/metric.hpp"
#include "pathembed/ultrametric.hpp"

namespace pathembed {

/*
 * Random hierarchical ball partition: one random point order and one random
 * radius scale in [1/2, 1) for the whole run; at level j every cluster is cut
 * into balls of radius scale * D / 2^(j+1) around the centres in order, D the
 * diameter. Internal labels are cluster diameters, so the result is a
 * non-contractive ultrametric with one leaf per point.
 */
UltraTree sample_tree_embedding(const MetricSpace& m, std::uint64_t seed);

struct EmbeddingSample {
    std::vector<UltraTree> trees;
    std::vector<std::uint64_t> seeds;
};

EmbeddingSample sample_embeddings(const MetricSpace& m, int count, std::uint64_t seed, int jobs = 1);

// All trees hung under a new root labelled max(diameter, child root labels).
MultiEmbedding union_under_root(const MetricSpace& m, const EmbeddingSample& sample);

}  // namespace pathembed
