#include <sdqn/sim/calibration.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdqn::sim {

namespace {

constexpr int kReferenceCpuCapacity = 4000;  // millicores

}  // namespace

double calibration_model_average(std::span<const int> distribution,
                                 const model::UsageModelParams& params,
                                 int cpu_demand_millicores) {
    if (distribution.empty()) {
        throw std::invalid_argument("empty distribution");
    }
    model::PodSpec pod;
    pod.pod_id = "cal";
    pod.cpu_demand = cpu_demand_millicores;
    pod.mem_demand = 1;
    pod.batch_id = "cal";

    double sum = 0.0;
    for (int count : distribution) {
        model::NodeState node;
        node.spec.node_id = 0;
        node.spec.name = "ref";
        node.spec.cpu_capacity = kReferenceCpuCapacity;
        node.spec.mem_capacity = 1 << 20;
        node.spec.max_pods = count + 1;
        node.resident_pods.assign(count, pod);
        sum += model::node_cpu_percent(node, params);
    }
    return sum / static_cast<double>(distribution.size());
}

CalibrationResult calibrate_usage_model(
    std::span<const CalibrationTarget> targets) {
    if (targets.empty()) {
        throw std::invalid_argument("no calibration targets");
    }
    for (const auto& target : targets) {
        if (target.distribution.empty()) {
            throw std::invalid_argument("calibration target with no nodes");
        }
    }

    const double deltas[] = {0.0,  0.01, 0.02, 0.03, 0.04, 0.05,
                             0.06, 0.08, 0.10, 0.12, 0.15};
    CalibrationResult best;
    best.rmse = std::numeric_limits<double>::infinity();
    model::UsageModelParams params;  // contention and noise stay at defaults
    for (int idle = 0; idle <= 8; ++idle) {
        for (int activation = 0; activation <= 14; ++activation) {
            for (double delta : deltas) {
                for (int demand = 24; demand <= 100; demand += 4) {
                    params.idle_pct = idle;
                    params.activation_pct = activation;
                    params.colocation_discount = delta;
                    double sq = 0.0;
                    for (const auto& target : targets) {
                        const double predicted = calibration_model_average(
                            target.distribution, params, demand);
                        const double err = predicted - target.avg_cpu_pct;
                        sq += err * err;
                    }
                    const double rmse =
                        std::sqrt(sq / static_cast<double>(targets.size()));
                    if (rmse < best.rmse) {
                        best.rmse = rmse;
                        best.params = params;
                        best.cpu_demand_millicores = demand;
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace sdqn::sim
