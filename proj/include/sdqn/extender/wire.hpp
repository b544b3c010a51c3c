#pragma once

#include <sdqn/model/usage_model.hpp>
#include <sdqn/rewards/features.hpp>
#include <sdqn/sched/policy.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdqn::extender {

struct PodSnapshot {
    std::string name;
    int cpu_demand_millicores = 0;
    int mem_demand_mib = 0;
};

struct NodeSnapshot {
    std::string name;
    int cpu_capacity = 0;
    int mem_capacity = 0;
    int max_pods = 0;
    bool ready = true;
    double uptime_hours = 0.0;
    int running_pods = 0;
    double cpu_pct = 0.0;
    double mem_pct = 0.0;
};

struct ExtenderArgs {
    PodSnapshot pod;
    std::vector<NodeSnapshot> nodes;
};

struct HostPriority {
    std::string host;
    int score = 0;  // 0..10
};

/// Feasibility predicates applied to a caller-supplied snapshot; the CPU
/// headroom check uses the usage model's marginal cost of one more pod.
/// Empty result means feasible, otherwise the violated predicate.
std::string snapshot_violation(const NodeSnapshot& node, const PodSnapshot& pod,
                               const model::UsageModelParams& usage);

rewards::NodeFeatures snapshot_features(const NodeSnapshot& node);

/// Affine rescale of raw scores to integer priorities 0..10 (max to 10,
/// min to 0, all-equal to 10). Order-preserving.
std::vector<int> rescale_to_priorities(std::span<const double> raw);

/// Raw policy score of one snapshot (least-allocated for the default
/// policy, Q-value for learned ones).
double snapshot_score(const sched::SchedulerPolicy& policy,
                      const NodeSnapshot& node, const PodSnapshot& pod,
                      const model::UsageModelParams& usage);

}  // namespace sdqn::extender
