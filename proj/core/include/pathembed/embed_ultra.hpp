#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pathembed/embedding.hpp"
#include "pathembed/metric.hpp"

namespace pathembed {

struct BetaChoice {
    double beta = 0.0;
    Criterion criterion = Criterion::size;
};

// (log2 n)^(1/t)
double beta_size(int n, int t);
// [t log2(4 delta)]^(2/t)
double beta_diameter(double delta, int t);
// Minimum of the two exponents; ties go to the size rule.
BetaChoice beta(int n, double delta, int t);

/*
 * Rings A_0 = {anchor} and A_i = {y : d(anchor, y) < i * delta / (4t)} for
 * i = 1..t around the anchor of a point subset, with fractions eps_i = |A_i| / n.
 */
struct ShellDecomposition {
    int anchor = 0;
    double delta = 0.0;  // diameter of the subset (not normalized)
    int t = 1;
    int n = 0;           // subset size
    std::vector<std::vector<int>> rings;
    std::vector<double> eps;

    int ring_size(int i) const { return static_cast<int>(rings.at(i).size()); }
    // S_i = A_i \ A_{i-1}
    std::vector<int> shell(int i) const;
};

ShellDecomposition decompose_shells(const MetricSpace& m, std::span<const int> points, int anchor,
                                    double delta, int t);

/*
 * Smallest i in [1, t] whose ring fractions satisfy the growth condition of
 * the chosen rule: eps_{i-1} >= eps_i^beta(n) for the size rule, and
 * eps_{i-1} >= eps_i^beta(delta/2) * n^(beta(delta/2) - beta(delta)) for the
 * diameter rule. `delta` is the normalized diameter (aspect-ratio units).
 * Throws InternalConsistencyError when no index qualifies.
 */
int select_shell(const ShellDecomposition& dec, int n, double delta, int t, Criterion criterion);

struct ShellStep {
    NodeId node = kNoNode;
    int anchor = 0;
    double delta = 0.0;
    int shell = 0;
    Criterion rule = Criterion::size;
    std::vector<double> eps;
    std::vector<int> left;   // A_shell
    std::vector<int> right;  // subset \ A_{shell-1}
};

struct ConstructionTrace {
    std::vector<ShellStep> steps;
};

struct UltraBuildOptions {
    std::size_t leaf_budget = 20'000'000;
    ConstructionTrace* trace = nullptr;
};

// Recursive shell-duplication multi-embedding into a binary ultrametric.
MultiEmbedding build_ultrametric_embedding(const MetricSpace& m, int t, const UltraBuildOptions& options = {});

struct EmbeddingViolation {
    std::string property;
    std::string detail;
    NodeId node = kNoNode;
    NodeId a = kNoNode;
    NodeId b = kNoNode;
};

struct EmbeddingAudit {
    int leaf_count = 0;
    double size_bound = 0.0;
    double beta = 0.0;
    Criterion criterion = Criterion::none;
    int internal_nodes = 0;
    bool exhaustive_leaf_pairs = false;
    std::vector<EmbeddingViolation> violations;

    bool ok() const { return violations.empty(); }
};

/*
 * Checks an ultrametric multi-embedding: fibers, 1-HST validity, leaf count
 * against n^beta, non-contractivity (leaf pairs exhaustively up to 2000
 * leaves, plus an exact per-node cross-child check at any size), binary
 * shape, cross-child separation Delta(T)/(4t), and the halving of support
 * and label at one child of every internal node.
 */
EmbeddingAudit audit_embedding(const MultiEmbedding& me, int t, std::size_t violation_limit = 200);

}  // namespace pathembed
