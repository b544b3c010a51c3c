#pragma once

#include <sdqn/model/cluster.hpp>
#include <sdqn/rewards/features.hpp>

#include <span>
#include <string>
#include <vector>

namespace sdqn::rewards {

/// Every threshold and point value of the scoring rules, externalized.
struct RewardConfig {
    double base = 100.0;
    double unhealthy_penalty = -100.0;
    double cpu_hi_pct = 70.0;
    double cpu_lo_pct = 40.0;
    double over_slope = -2.0;  // points per percent above cpu_hi/mem_hi
    double band_bonus = 10.0;
    double band_miss = -10.0;
    double podutil_lo = 0.6;
    double podutil_hi = 0.9;
    double podutil_bonus = 20.0;
    double podutil_miss = -10.0;
    double uptime_threshold_hours = 24.0;
    double uptime_bonus = 5.0;
    double uptime_miss = -5.0;
    double spread_bonus_per_node = 5.0;
    int n_target = 2;
    double top_n_hit = 20.0;
    double top_n_miss = -50.0;
    double fallback_nonempty = 20.0;
    double fallback_empty = -10.0;

    void validate() const;
};

/// Placement context a single node score cannot see on its own.
///
/// nodes_with_batch_pods counts distinct nodes hosting pods of the current
/// batch after the hypothetical placement; top_n_ids and target_running_pods
/// describe the pre-placement state of the candidate set.
struct DistributionContext {
    int nodes_with_batch_pods = 0;
    int candidate_count = 0;
    std::vector<int> top_n_ids;
    int target_node_id = -1;
    int target_running_pods = 0;
};

double reward_sdqn(const NodeFeatures& features, const DistributionContext& ctx,
                   const RewardConfig& cfg);

/// Same rule set with the spread term replaced by the top-n distribution
/// term (consolidation onto n_target nodes).
double reward_sdqn_n(const NodeFeatures& features,
                     const DistributionContext& ctx, const RewardConfig& cfg);

/// The n candidate nodes with the most current-batch pods; ties broken by
/// lower node id. With no batch pods placed yet this degenerates to the n
/// lowest-id candidates.
std::vector<int> top_n_nodes(const model::ClusterState& cluster,
                             const std::string& batch_id, int n,
                             std::span<const int> candidates);

}  // namespace sdqn::rewards
