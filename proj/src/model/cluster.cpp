#include <sdqn/model/cluster.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sdqn::model {

FeasibilityResult feasible(const NodeState& node, const PodSpec& pod,
                           const UsageModelParams& model) {
    if (!node.ready) {
        return {false, "unhealthy"};
    }
    if (node.running_pods() >= node.spec.max_pods) {
        return {false, "max pods"};
    }
    if (mem_percent_after(node, pod) > 100.0 ||
        node.total_mem_demand() + pod.mem_demand > node.spec.mem_capacity) {
        return {false, "memory capacity"};
    }
    if (cpu_percent_after(node, pod, model) > kCpuHeadroomPct) {
        return {false, "cpu headroom"};
    }
    return {};
}

const NodeState& ClusterState::node_by_id(int node_id) const {
    for (const auto& node : nodes) {
        if (node.spec.node_id == node_id) {
            return node;
        }
    }
    throw std::out_of_range("no such node: " + std::to_string(node_id));
}

NodeState& ClusterState::node_by_id(int node_id) {
    for (auto& node : nodes) {
        if (node.spec.node_id == node_id) {
            return node;
        }
    }
    throw std::out_of_range("no such node: " + std::to_string(node_id));
}

void ClusterState::validate() const {
    if (nodes.empty()) {
        throw std::invalid_argument("cluster must have at least one node");
    }
    usage.validate();
    std::set<int> ids;
    for (const auto& node : nodes) {
        node.spec.validate();
        if (!ids.insert(node.spec.node_id).second) {
            throw std::invalid_argument("duplicate node_id " +
                                        std::to_string(node.spec.node_id));
        }
        if (node.running_pods() > node.spec.max_pods) {
            throw std::invalid_argument("node " + node.spec.name +
                                        " exceeds max_pods");
        }
        if (node.total_mem_demand() > node.spec.mem_capacity) {
            throw std::invalid_argument("node " + node.spec.name +
                                        " exceeds memory capacity");
        }
    }
}

void place_pod(ClusterState& cluster, int node_id, const PodSpec& pod) {
    NodeState& node = cluster.node_by_id(node_id);
    const FeasibilityResult check = feasible(node, pod, cluster.usage);
    if (!check) {
        throw std::runtime_error("placement rejected: " + check.violated);
    }
    node.resident_pods.push_back(pod);
}

void remove_pod(ClusterState& cluster, int node_id, const std::string& pod_id) {
    NodeState& node = cluster.node_by_id(node_id);
    auto it = std::find_if(
        node.resident_pods.begin(), node.resident_pods.end(),
        [&](const PodSpec& pod) { return pod.pod_id == pod_id; });
    if (it == node.resident_pods.end()) {
        throw std::out_of_range("no such pod on node: " + pod_id);
    }
    node.resident_pods.erase(it);
}

double cluster_avg_cpu(const ClusterState& cluster) {
    return cluster_avg_cpu(cluster, [](int) { return 0.0; });
}

double cluster_avg_cpu(const ClusterState& cluster,
                       const std::function<double(int)>& noise) {
    if (cluster.nodes.empty()) {
        throw std::invalid_argument("no nodes");
    }
    double sum = 0.0;
    for (const auto& node : cluster.nodes) {
        sum += node_cpu_percent(node, cluster.usage, noise(node.spec.node_id));
    }
    return sum / static_cast<double>(cluster.nodes.size());
}

int active_node_count(const ClusterState& cluster) {
    int count = 0;
    for (const auto& node : cluster.nodes) {
        if (node.running_pods() > 0) {
            ++count;
        }
    }
    return count;
}

}  // namespace sdqn::model
