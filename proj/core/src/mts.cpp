#include "pathembed/mts.hpp"

#include <algorithm>
#include <cmath>

#include "pathembed/errors.hpp"

namespace pathembed {

double cap_cost(double c) {
    if (std::isnan(c)) throw InputError("mts: NaN task cost");
    return std::min(c, kMtsInfinity);
}

double sat_add(double a, double b) {
    return std::min(a + b, kMtsInfinity);
}

MtsInstance make_mts_instance(MetricSpace space, std::vector<std::vector<double>> tasks, int start) {
    for (auto& t : tasks) {
        for (double& c : t) c = cap_cost(c);
    }
    MtsInstance inst{std::move(space), std::move(tasks), start};
    validate_instance(inst);
    return inst;
}

void validate_instance(const MtsInstance& inst) {
    const int n = inst.space.size();
    if (n < 1) throw InputError("mts: empty state space");
    if (inst.start < 0 || inst.start >= n) throw InputError("mts: start state out of range");
    for (std::size_t i = 0; i < inst.tasks.size(); ++i) {
        if (static_cast<int>(inst.tasks[i].size()) != n) {
            throw InputError("mts: task " + std::to_string(i) + " has the wrong length");
        }
        for (double c : inst.tasks[i]) {
            if (!(c >= 0.0)) throw InputError("mts: task " + std::to_string(i) + " has a negative cost");
        }
    }
}

double schedule_cost(const MtsInstance& inst, const std::vector<int>& states) {
    if (states.size() != inst.tasks.size()) throw InputError("mts: schedule length differs from task count");
    double cost = 0.0;
    int at = inst.start;
    for (std::size_t i = 0; i < states.size(); ++i) {
        cost = sat_add(cost, inst.space(at, states[i]));
        cost = sat_add(cost, inst.tasks[i][states[i]]);
        at = states[i];
    }
    return cost >= kMtsForbidden ? kMtsInfinity : cost;
}

ReducedMts reduce_tasks(const MultiEmbedding& me, const MtsInstance& inst) {
    validate_instance(inst);
    if (!(inst.space == me.source)) throw InputError("reduce_tasks: instance space is not the embedding source");
    ReducedMts out;
    out.state_node = me.mapped_nodes();
    for (NodeId u : out.state_node) out.state_point.push_back(me.point_of(u));
    std::vector<std::vector<double>> tasks;
    tasks.reserve(inst.tasks.size());
    for (const auto& t : inst.tasks) {
        std::vector<double> tn(out.state_node.size());
        for (std::size_t s = 0; s < tn.size(); ++s) tn[s] = t[out.state_point[s]];
        tasks.push_back(std::move(tn));
    }
    const NodeId first = me.fibers.at(inst.start).front();
    const auto it = std::lower_bound(out.state_node.begin(), out.state_node.end(), first);
    const int start = static_cast<int>(it - out.state_node.begin());
    out.instance = MtsInstance{target_metric(me), std::move(tasks), start};
    return out;
}

Schedule offline_opt(const MtsInstance& inst) {
    validate_instance(inst);
    const int n = inst.space.size();
    const std::size_t m = inst.tasks.size();
    Schedule out;
    if (m == 0) return out;
    std::vector<double> dp(n, kMtsInfinity);
    dp[inst.start] = 0.0;
    std::vector<std::vector<int>> pred(m, std::vector<int>(n, -1));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> next(n, kMtsInfinity);
        for (int u = 0; u < n; ++u) {
            double best = kMtsInfinity;
            int arg = -1;
            for (int v = 0; v < n; ++v) {
                const double c = sat_add(dp[v], inst.space(v, u));
                if (arg < 0 || c < best) {
                    best = c;
                    arg = v;
                }
            }
            next[u] = sat_add(best, inst.tasks[i][u]);
            pred[i][u] = arg;
        }
        dp = std::move(next);
    }
    int end = 0;
    for (int u = 1; u < n; ++u) {
        if (dp[u] < dp[end]) end = u;
    }
    out.states.assign(m, 0);
    out.states[m - 1] = end;
    for (std::size_t i = m - 1; i > 0; --i) out.states[i - 1] = pred[i][out.states[i]];
    out.cost = schedule_cost(inst, out.states);
    if (dp[end] >= kMtsForbidden) out.cost = kMtsInfinity;
    return out;
}

Schedule wfa_online(const MtsInstance& inst) {
    validate_instance(inst);
    const int n = inst.space.size();
    std::vector<double> w(n);
    for (int u = 0; u < n; ++u) w[u] = inst.space(inst.start, u);
    int at = inst.start;
    Schedule out;
    for (const auto& task : inst.tasks) {
        std::vector<double> next(n);
        for (int u = 0; u < n; ++u) {
            double best = kMtsInfinity;
            for (int v = 0; v < n; ++v) best = std::min(best, sat_add(w[v], inst.space(v, u)));
            next[u] = sat_add(best, task[u]);
        }
        w = std::move(next);
        int choice = 0;
        double score = kMtsInfinity;
        for (int u = 0; u < n; ++u) {
            const double c = sat_add(w[u], inst.space(at, u));
            if (u == 0 || c < score) {
                score = c;
                choice = u;
            }
        }
        at = choice;
        out.states.push_back(at);
    }
    out.cost = schedule_cost(inst, out.states);
    return out;
}

MtsReport run_experiment(const MultiEmbedding& me, const MtsInstance& inst) {
    MtsReport rep;
    const ReducedMts reduced = reduce_tasks(me, inst);
    rep.source_opt = offline_opt(inst).cost;
    rep.target_opt = offline_opt(reduced.instance).cost;
    const Schedule online = wfa_online(reduced.instance);
    rep.target_online = online.cost;
    for (int s : online.states) rep.projected_states.push_back(reduced.state_point[s]);
    rep.projected_online = schedule_cost(inst, rep.projected_states);
    rep.alpha_bound = alpha_bound(me);
    rep.opt_margin = rep.alpha_bound * rep.source_opt - rep.target_opt;
    rep.online_margin = rep.target_online - rep.projected_online;
    if (rep.source_opt > 0.0) {
        rep.empirical_ratio = rep.projected_online / rep.source_opt;
    } else {
        rep.empirical_ratio = rep.projected_online > 0.0 ? kMtsInfinity : 1.0;
    }
    const bool infeasible = rep.source_opt >= kMtsForbidden;
    rep.holds = leq_tol(rep.projected_online, rep.target_online) &&
                (infeasible || leq_tol(rep.target_opt, rep.alpha_bound * rep.source_opt));
    return rep;
}

}  // namespace pathembed
