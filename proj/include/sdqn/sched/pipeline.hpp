#pragma once

#include <sdqn/common/rng.hpp>
#include <sdqn/model/cluster.hpp>
#include <sdqn/sched/policy.hpp>

#include <functional>
#include <span>
#include <vector>

namespace sdqn::sched {

/// All and only feasible nodes, in node id order.
std::vector<int> filter(const model::ClusterState& cluster,
                        const model::PodSpec& pod);

/// Least-allocated priority of the default scheduler: mean of the free CPU
/// and memory fractions after a hypothetical placement, times 100.
double score_default(const model::ClusterState& cluster,
                     const model::PodSpec& pod, int node_id);

/// Q-value of placing the pod on the node: the scorer applied to the node's
/// normalized features.
double score_learned(const SchedulerPolicy& policy,
                     const model::ClusterState& cluster, int node_id);

/// Epsilon-greedy argmax with uniform tie-breaking among exactly equal top
/// scores. `epsilon_used` reports whether the exploration branch fired.
int choose(std::span<const int> candidates, std::span<const double> scores,
           double epsilon, SplitMix64& rng, bool* epsilon_used = nullptr);

/// Pre-placement context for the distribution terms of the reward rules.
rewards::DistributionContext make_distribution_context(
    const model::ClusterState& cluster, const model::PodSpec& pod,
    std::span<const int> candidates, int target_node_id,
    const rewards::RewardConfig& cfg);

struct BatchResult {
    model::ClusterState cluster;
    std::vector<Decision> decisions;
};

/// Called after each successful placement, before the next pod is scored.
using PlacementHook = std::function<void(Decision&, model::ClusterState&)>;

/// Places pods one at a time, refreshing cluster state between decisions.
/// Unschedulable pods are recorded and skipped.
BatchResult schedule_batch(const SchedulerPolicy& policy,
                           model::ClusterState cluster,
                           std::span<const model::PodSpec> pods, double epsilon,
                           SplitMix64& rng, const PlacementHook& hook = {});

}  // namespace sdqn::sched
