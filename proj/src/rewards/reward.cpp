#include <sdqn/rewards/reward.hpp>

#include <algorithm>
#include <stdexcept>

namespace sdqn::rewards {

void RewardConfig::validate() const {
    if (cpu_lo_pct >= cpu_hi_pct) {
        throw std::invalid_argument("cpu_lo_pct must be below cpu_hi_pct");
    }
    if (podutil_lo >= podutil_hi) {
        throw std::invalid_argument("podutil_lo must be below podutil_hi");
    }
    if (n_target < 1) {
        throw std::invalid_argument("n_target must be >= 1");
    }
}

namespace {

// Band rule shared by CPU and memory: linear penalty above the high
// threshold, bonus inside [lo, hi] (both ends inclusive), miss below.
double band_term(double pct, const RewardConfig& cfg) {
    if (pct > cfg.cpu_hi_pct) {
        return cfg.over_slope * (pct - cfg.cpu_hi_pct);
    }
    if (pct >= cfg.cpu_lo_pct) {
        return cfg.band_bonus;
    }
    return cfg.band_miss;
}

double shared_terms(const NodeFeatures& f, const RewardConfig& cfg) {
    double points = cfg.base;
    if (f.health == 0) {
        points += cfg.unhealthy_penalty;
    }
    points += band_term(f.cpu_pct, cfg);
    points += band_term(f.mem_pct, cfg);
    const double util = f.pod_util_pct / 100.0;
    points += (util >= cfg.podutil_lo && util <= cfg.podutil_hi)
                  ? cfg.podutil_bonus
                  : cfg.podutil_miss;
    points += (f.uptime_hours >= cfg.uptime_threshold_hours) ? cfg.uptime_bonus
                                                             : cfg.uptime_miss;
    return points;
}

}  // namespace

double reward_sdqn(const NodeFeatures& features, const DistributionContext& ctx,
                   const RewardConfig& cfg) {
    double points = shared_terms(features, cfg);
    points += cfg.spread_bonus_per_node *
              std::max(0, ctx.nodes_with_batch_pods - 1);
    return points;
}

double reward_sdqn_n(const NodeFeatures& features,
                     const DistributionContext& ctx, const RewardConfig& cfg) {
    double points = shared_terms(features, cfg);
    if (ctx.candidate_count >= cfg.n_target) {
        const bool in_top_n =
            std::find(ctx.top_n_ids.begin(), ctx.top_n_ids.end(),
                      ctx.target_node_id) != ctx.top_n_ids.end();
        points += in_top_n ? cfg.top_n_hit : cfg.top_n_miss;
    } else {
        points += ctx.target_running_pods > 0 ? cfg.fallback_nonempty
                                              : cfg.fallback_empty;
    }
    return points;
}

std::vector<int> top_n_nodes(const model::ClusterState& cluster,
                             const std::string& batch_id, int n,
                             std::span<const int> candidates) {
    if (n < 1) {
        throw std::invalid_argument("top_n_nodes: n must be >= 1");
    }
    std::vector<std::pair<int, int>> ranked;  // (batch pods, node id)
    ranked.reserve(candidates.size());
    for (int id : candidates) {
        ranked.emplace_back(cluster.node_by_id(id).batch_pod_count(batch_id), id);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) {
            return a.first > b.first;
        }
        return a.second < b.second;
    });
    std::vector<int> top;
    for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(n);
         ++i) {
        top.push_back(ranked[i].second);
    }
    return top;
}

}  // namespace sdqn::rewards
