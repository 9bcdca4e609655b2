#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathembed/embedding.hpp"
#include "pathembed/rng.hpp"

namespace pathembed {

/*
 * Constructive realization in a binary ultrametric embedding: recursive
 * two-subtree partition of the path into pieces realized in alternating
 * subtrees, joined by connector pieces realized in the halving child.
 * Throws ParameterError if t differs from the embedding's recorded t.
 */
RepPath realize_path(const MultiEmbedding& me, const PointPath& p, int t);
RepPath realize_path(const MultiEmbedding& me, const PointPath& p);

// 8 t log2 min{n, aspect} * l(p) at the embedding's top-level n, aspect and t.
double realization_bound(const MultiEmbedding& me, const PointPath& p);

/*
 * Minimum-length representative path by stage-wise DP over fibers; ties go
 * to the smallest leaf id. Ultrametric targets with monotone labels use an
 * ancestor-minimum DP, star targets a per-path DP, other targets the pairwise form.
 */
RepPath optimal_rep_path(const MultiEmbedding& me, const PointPath& p);
// The O(sum |F_i| |F_i+1|) pairwise DP, for any target.
RepPath optimal_rep_path_pairwise(const MultiEmbedding& me, const PointPath& p);

enum class WalkMode { local, uniform };

std::string to_string(WalkMode mode);
WalkMode parse_walk_mode(const std::string& name);

// Random walk of `steps` moves from a uniform start. local: to a uniform
// nearest point (a graph neighbour on graph metrics); uniform: to any other point.
PointPath sample_walk(const MetricSpace& m, int steps, WalkMode mode, Rng& rng);

// Every point once, ordered by distance from the diameter anchor (ties by id).
PointPath sweep_path(const MetricSpace& m);

struct SamplerSpec {
    WalkMode mode = WalkMode::local;
    int steps = 16;
    bool sweep = true;  // append the deterministic sweep path after the random trials
};

struct TrialRecord {
    int trial = 0;
    double path_len = 0.0;
    double realized = 0.0;  // NaN when the target has no constructive realization for the path
    double optimal = 0.0;
    bool violation = false;
};

struct DistortionStats {
    int trials = 0;
    double bound = 0.0;
    double max_ratio_realized = 0.0;  // NaN when no trial was realized
    double max_ratio_optimal = 0.0;
    double mean_ratio = 0.0;  // mean optimal / l(p) over trials with l(p) > 0
    int violations = 0;
    std::vector<TrialRecord> records;
};

DistortionStats distortion_stats(const MultiEmbedding& me, const SamplerSpec& sampler, int trials,
                                 std::uint64_t seed, int jobs = 1);

// trial,path_len,realized,optimal rows with a header line.
std::string stats_csv(const DistortionStats& stats);

struct LowerBoundReport {
    int n = 0;
    double optimal = 0.0;
    double required = 0.0;            // (n/2) log2 n
    double implied_distortion = 0.0;  // required / (n - 1)
    bool holds = true;
    RepPath path;
};

// For an embedding of the path metric |i - j|: optimal length of <0..n-1>.
LowerBoundReport lower_bound_check(const MultiEmbedding& me);

}  // namespace pathembed
