#include <sdqn/sim/experiment.hpp>

#include <sdqn/common/rng.hpp>
#include <sdqn/sched/pipeline.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace sdqn::sim {

double coefficient_of_variation(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("coefficient_of_variation: empty input");
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    if (mean == 0.0) {
        throw std::invalid_argument("coefficient_of_variation: zero mean");
    }
    double sq = 0.0;
    for (double v : values) {
        sq += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(sq / static_cast<double>(values.size()));
    return 100.0 * sd / mean;
}

std::vector<double> measure_node_cpu(const model::ClusterState& cluster,
                                     std::uint64_t seed) {
    std::vector<double> observed;
    observed.reserve(cluster.nodes.size());
    const double sigma = cluster.usage.noise_sigma_pct;
    for (const auto& node : cluster.nodes) {
        const double eps =
            sigma > 0.0
                ? sigma * standard_normal(seed, node.spec.node_id, 0)
                : 0.0;
        observed.push_back(node_cpu_percent(node, cluster.usage, eps));
    }
    return observed;
}

TrialResult run_trial(const Scenario& scenario,
                      const sched::SchedulerPolicy& policy,
                      std::uint64_t seed) {
    model::ClusterState cluster = scenario.make_cluster(seed);
    const auto pods = scenario.make_batch();
    // Tie-break stream is policy-scoped: distinct schedulers do not share
    // coin flips, only the seed-paired scenario and measurement noise.
    SplitMix64 rng(mix_seed(seed, 0x747269616c,
                            static_cast<std::uint64_t>(policy.kind)));
    auto batch = sched::schedule_batch(policy, std::move(cluster), pods, 0.0, rng);

    TrialResult result;
    result.seed = seed;
    result.node_cpu_pct = measure_node_cpu(batch.cluster, seed);
    double sum = 0.0;
    for (double v : result.node_cpu_pct) {
        sum += v;
    }
    result.avg_cpu_pct = sum / static_cast<double>(result.node_cpu_pct.size());
    for (const auto& node : batch.cluster.nodes) {
        result.pod_counts.push_back(node.running_pods());
    }
    result.active_nodes = model::active_node_count(batch.cluster);
    for (const auto& decision : batch.decisions) {
        if (decision.unschedulable()) {
            ++result.unschedulable;
        }
    }
    result.decisions = std::move(batch.decisions);
    return result;
}

ExperimentReport run_experiment(const Scenario& scenario,
                                const sched::SchedulerPolicy& policy) {
    scenario.validate();
    ExperimentReport report;
    report.scheduler = sched::policy_name(policy.kind);
    for (const auto& node : scenario.nodes) {
        report.node_names.push_back(node.name);
    }
    // Trials are independent (each owns its cluster and rng); run them in
    // parallel and assemble in seed order so reports stay deterministic.
    std::vector<std::future<TrialResult>> futures;
    futures.reserve(scenario.trials);
    for (int i = 0; i < scenario.trials; ++i) {
        futures.push_back(std::async(std::launch::async, [&scenario, &policy,
                                                          i] {
            return run_trial(scenario, policy, scenario.base_seed + i);
        }));
    }
    std::vector<double> averages;
    double active_sum = 0.0;
    report.min_active_nodes = static_cast<int>(scenario.nodes.size());
    report.max_active_nodes = 0;
    for (int i = 0; i < scenario.trials; ++i) {
        TrialResult trial = futures[i].get();
        trial.trial = i + 1;
        averages.push_back(trial.avg_cpu_pct);
        active_sum += trial.active_nodes;
        report.min_active_nodes =
            std::min(report.min_active_nodes, trial.active_nodes);
        report.max_active_nodes =
            std::max(report.max_active_nodes, trial.active_nodes);
        report.trials.push_back(std::move(trial));
    }
    double mean = 0.0;
    for (double v : averages) {
        mean += v;
    }
    report.mean_avg_cpu_pct = mean / static_cast<double>(averages.size());
    report.cv_pct =
        averages.size() > 1 ? coefficient_of_variation(averages) : 0.0;
    report.mean_active_nodes = active_sum / static_cast<double>(scenario.trials);
    return report;
}

Comparison compare_all(
    const Scenario& scenario,
    const std::map<sched::PolicyKind, nn::ParamStore>& trained) {
    const sched::PolicyKind kinds[] = {
        sched::PolicyKind::kDefault,      sched::PolicyKind::kRandom,
        sched::PolicyKind::kSdqn,         sched::PolicyKind::kSdqnN,
        sched::PolicyKind::kLstm,         sched::PolicyKind::kTransformer,
    };
    Comparison comparison;
    for (sched::PolicyKind kind : kinds) {
        sched::SchedulerPolicy policy =
            sched::make_policy(kind, scenario.reward, scenario.training);
        if (sched::is_learned(kind)) {
            auto it = trained.find(kind);
            if (it == trained.end()) {
                throw std::invalid_argument("no trained weights for policy " +
                                            sched::policy_name(kind));
            }
            policy.params = it->second;
        }
        comparison.reports.push_back(run_experiment(scenario, policy));
    }
    for (const auto& report : comparison.reports) {
        comparison.ranking.push_back(
            {report.scheduler, report.mean_avg_cpu_pct, report.cv_pct});
    }
    std::sort(comparison.ranking.begin(), comparison.ranking.end(),
              [](const ComparisonRow& a, const ComparisonRow& b) {
                  if (a.mean_avg_cpu_pct != b.mean_avg_cpu_pct) {
                      return a.mean_avg_cpu_pct < b.mean_avg_cpu_pct;
                  }
                  return a.scheduler < b.scheduler;
              });
    return comparison;
}

}  // namespace sdqn::sim
