#pragma once

#include <vector>

#include "pathembed/embedding.hpp"
#include "pathembed/metric.hpp"

namespace pathembed {

// Task costs at or above this are treated as infinite.
inline constexpr double kMtsInfinity = 1e12;
inline constexpr double kMtsForbidden = 1e11;

// Caps a cost at kMtsInfinity (maps +inf and NaN-free huge values alike).
double cap_cost(double c);
// a + b saturating at kMtsInfinity.
double sat_add(double a, double b);

struct MtsInstance {
    MetricSpace space;
    std::vector<std::vector<double>> tasks;  // each of length n, capped
    int start = 0;
};

MtsInstance make_mts_instance(MetricSpace space, std::vector<std::vector<double>> tasks, int start = 0);
void validate_instance(const MtsInstance& inst);

struct Schedule {
    std::vector<int> states;  // state after serving each task
    double cost = 0.0;        // kMtsInfinity when infeasible
    bool feasible() const { return cost < kMtsForbidden; }
};

// Movement plus service cost of a schedule from inst.start.
double schedule_cost(const MtsInstance& inst, const std::vector<int>& states);

// One state per target leaf (or star node); tasks pulled back through f.
struct ReducedMts {
    MtsInstance instance;
    std::vector<NodeId> state_node;
    std::vector<int> state_point;
};

ReducedMts reduce_tasks(const MultiEmbedding& me, const MtsInstance& inst);

// Exact offline optimum, O(m n^2); ties toward smaller state index.
Schedule offline_opt(const MtsInstance& inst);

// Deterministic work-function algorithm: after task i move to the state
// minimizing w_i(u) + d(current, u); ties toward smaller index.
Schedule wfa_online(const MtsInstance& inst);

struct MtsReport {
    double source_opt = 0.0;
    double target_opt = 0.0;
    double target_online = 0.0;
    double projected_online = 0.0;
    double alpha_bound = 0.0;
    double opt_margin = 0.0;     // alpha_bound * source_opt - target_opt
    double online_margin = 0.0;  // target_online - projected_online
    double empirical_ratio = 0.0;  // projected_online / source_opt (1 when both are 0)
    bool holds = true;
    std::vector<int> projected_states;
};

MtsReport run_experiment(const MultiEmbedding& me, const MtsInstance& inst);

}  // namespace pathembed
