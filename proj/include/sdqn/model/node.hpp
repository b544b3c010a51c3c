#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sdqn::model {

struct NodeSpec {
    int node_id = 0;
    std::string name;
    int cpu_capacity = 0;  // millicores
    int mem_capacity = 0;  // MiB
    int max_pods = 0;
    double start_time_hours = 0.0;

    void validate() const {
        if (cpu_capacity <= 0 || mem_capacity <= 0) {
            throw std::invalid_argument("node " + name +
                                        ": capacities must be positive");
        }
        if (max_pods < 1) {
            throw std::invalid_argument("node " + name + ": max_pods must be >= 1");
        }
        if (node_id < 0) {
            throw std::invalid_argument("node " + name + ": negative node_id");
        }
    }
};

struct PodSpec {
    std::string pod_id;
    int cpu_demand = 0;  // millicores
    int mem_demand = 0;  // MiB
    std::string batch_id;

    void validate() const {
        if (cpu_demand <= 0 || mem_demand <= 0) {
            throw std::invalid_argument("pod " + pod_id +
                                        ": demands must be positive");
        }
    }
};

struct NodeState {
    NodeSpec spec;
    bool ready = true;
    std::vector<PodSpec> resident_pods;  // placement order preserved
    double uptime_hours = 0.0;

    int running_pods() const { return static_cast<int>(resident_pods.size()); }

    long total_mem_demand() const {
        long sum = 0;
        for (const auto& pod : resident_pods) {
            sum += pod.mem_demand;
        }
        return sum;
    }

    int batch_pod_count(const std::string& batch_id) const {
        int count = 0;
        for (const auto& pod : resident_pods) {
            if (pod.batch_id == batch_id) {
                ++count;
            }
        }
        return count;
    }
};

}  // namespace sdqn::model
