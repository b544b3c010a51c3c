#include <sdqn/sim/scenario.hpp>

#include <stdexcept>

namespace sdqn::sim {

void Scenario::validate() const {
    if (nodes.empty()) {
        throw std::invalid_argument("scenario needs at least one node");
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (batch.count < 0 || batch.cpu_demand <= 0 || batch.mem_demand <= 0) {
        throw std::invalid_argument("bad batch description");
    }
    usage.validate();
    reward.validate();
    training.validate();
    make_cluster(0).validate();
}

model::ClusterState Scenario::make_cluster(std::uint64_t seed) const {
    model::ClusterState cluster;
    cluster.rng_seed = seed;
    cluster.usage = usage;
    int id = 0;
    for (const auto& cfg : nodes) {
        model::NodeState node;
        node.spec.node_id = id++;
        node.spec.name = cfg.name;
        node.spec.cpu_capacity = cfg.cpu_capacity;
        node.spec.mem_capacity = cfg.mem_capacity;
        node.spec.max_pods = cfg.max_pods;
        node.spec.start_time_hours = 0.0;
        node.ready = cfg.ready;
        node.uptime_hours = cfg.uptime_hours;
        cluster.nodes.push_back(std::move(node));
    }
    return cluster;
}

std::vector<model::PodSpec> Scenario::make_batch() const {
    std::vector<model::PodSpec> pods;
    pods.reserve(batch.count);
    for (int i = 0; i < batch.count; ++i) {
        model::PodSpec pod;
        pod.pod_id = "pod-" + std::to_string(i);
        pod.cpu_demand = batch.cpu_demand;
        pod.mem_demand = batch.mem_demand;
        pod.batch_id = "batch-0";
        pods.push_back(std::move(pod));
    }
    return pods;
}

Scenario default_scenario() {
    Scenario s;
    s.nodes = {
        {"slave1", 4000, 8192, 110, true, 48.0},
        {"slave2", 4000, 8192, 110, true, 48.0},
        {"slave3", 4000, 8192, 110, true, 48.0},
        {"slave4", 2000, 4096, 110, true, 48.0},
    };
    return s;
}

}  // namespace sdqn::sim
