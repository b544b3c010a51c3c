#pragma once

#include <sdqn/model/node.hpp>
#include <sdqn/model/usage_model.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sdqn::model {

// Feasibility headroom: a placement must leave deterministic CPU at or
// below this bound.
constexpr double kCpuHeadroomPct = 95.0;

struct FeasibilityResult {
    bool ok = true;
    std::string violated;  // empty when ok; otherwise the failed predicate

    explicit operator bool() const { return ok; }
};

/// Predicate check for placing `pod` on `node`. The first violated
/// predicate, in order: unhealthy, max pods, memory capacity, cpu headroom.
FeasibilityResult feasible(const NodeState& node, const PodSpec& pod,
                           const UsageModelParams& model);

struct ClusterState {
    std::vector<NodeState> nodes;
    std::uint64_t rng_seed = 0;
    UsageModelParams usage;

    const NodeState& node_by_id(int node_id) const;
    NodeState& node_by_id(int node_id);
    void validate() const;
};

/// Appends the pod to the node's resident list. Throws on unknown node or
/// when any feasibility predicate fails.
void place_pod(ClusterState& cluster, int node_id, const PodSpec& pod);

/// Removes a resident pod by id; throws if absent.
void remove_pod(ClusterState& cluster, int node_id, const std::string& pod_id);

/// Mean of node CPU percent over all nodes, idle nodes included.
double cluster_avg_cpu(const ClusterState& cluster);

/// Same, with a per-node noise draw (node_id -> epsilon) applied.
double cluster_avg_cpu(const ClusterState& cluster,
                       const std::function<double(int)>& noise);

/// Nodes currently hosting at least one pod.
int active_node_count(const ClusterState& cluster);

}  // namespace sdqn::model
