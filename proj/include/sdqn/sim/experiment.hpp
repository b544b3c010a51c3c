#pragma once

#include <sdqn/sim/scenario.hpp>

#include <map>
#include <span>
#include <vector>

namespace sdqn::sim {

/// Population coefficient of variation in percent:
/// 100 * sqrt(mean((x - mean)^2)) / mean.
double coefficient_of_variation(std::span<const double> values);

/// Observed CPU of every node after placement, one noise draw per node
/// addressed by (seed, node_id, measurement 0).
std::vector<double> measure_node_cpu(const model::ClusterState& cluster,
                                     std::uint64_t seed);

/// One seeded trial: fresh cluster, batch scheduled greedily (epsilon 0),
/// then a single noisy measurement per node.
TrialResult run_trial(const Scenario& scenario,
                      const sched::SchedulerPolicy& policy, std::uint64_t seed);

/// `trials` runs with seeds base_seed, base_seed+1, ... and aggregates.
ExperimentReport run_experiment(const Scenario& scenario,
                                const sched::SchedulerPolicy& policy);

struct ComparisonRow {
    std::string scheduler;
    double mean_avg_cpu_pct = 0.0;
    double cv_pct = 0.0;
};

struct Comparison {
    std::vector<ExperimentReport> reports;  // one per policy
    std::vector<ComparisonRow> ranking;     // ascending mean average CPU
};

/// Runs every policy on the scenario. Learned policies take their trained
/// parameter snapshots from `trained`; evaluation is greedy.
Comparison compare_all(
    const Scenario& scenario,
    const std::map<sched::PolicyKind, nn::ParamStore>& trained);

}  // namespace sdqn::sim
