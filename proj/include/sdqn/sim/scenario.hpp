#pragma once

#include <sdqn/model/cluster.hpp>
#include <sdqn/sched/policy.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sdqn::sim {

struct NodeConfig {
    std::string name;
    int cpu_capacity = 4000;  // millicores
    int mem_capacity = 8192;  // MiB
    int max_pods = 110;
    bool ready = true;
    double uptime_hours = 48.0;
};

struct BatchConfig {
    int count = 50;
    int cpu_demand = 80;  // millicores per pod
    int mem_demand = 64;  // MiB per pod
};

/// A complete experiment description: roster, deployment batch, usage
/// model, reward rules, training setup, trial count and seeding.
struct Scenario {
    std::vector<NodeConfig> nodes;
    BatchConfig batch;
    model::UsageModelParams usage;
    rewards::RewardConfig reward;
    sched::TrainingConfig training;
    int trials = 5;
    std::uint64_t base_seed = 2024;

    void validate() const;
    model::ClusterState make_cluster(std::uint64_t seed) const;
    std::vector<model::PodSpec> make_batch() const;
};

/// Four slaves; the fourth is half-size, echoing its persistently small
/// share of placements in the reference runs.
Scenario default_scenario();

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    std::vector<int> pod_counts;        // per node, roster order
    std::vector<double> node_cpu_pct;   // observed (noisy) per node
    double avg_cpu_pct = 0.0;
    int active_nodes = 0;
    int unschedulable = 0;
    std::vector<sched::Decision> decisions;
};

struct ExperimentReport {
    std::string scheduler;
    std::vector<std::string> node_names;
    std::vector<TrialResult> trials;
    double mean_avg_cpu_pct = 0.0;
    double cv_pct = 0.0;
    double mean_active_nodes = 0.0;
    int min_active_nodes = 0;
    int max_active_nodes = 0;
};

}  // namespace sdqn::sim
