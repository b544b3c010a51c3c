#pragma once

#include <sdqn/model/usage_model.hpp>

#include <span>
#include <vector>

namespace sdqn::sim {

/// A reported run to fit: the per-node pod counts and the cluster average
/// CPU percent observed for them.
struct CalibrationTarget {
    std::vector<int> distribution;
    double avg_cpu_pct = 0.0;
};

struct CalibrationResult {
    model::UsageModelParams params;
    int cpu_demand_millicores = 0;  // fitted per-pod demand on a 4000m node
    double rmse = 0.0;
};

/// Noise-free model average for a pod-count distribution on identical
/// reference nodes (4000 millicores).
double calibration_model_average(std::span<const int> distribution,
                                 const model::UsageModelParams& params,
                                 int cpu_demand_millicores);

/// Deterministic grid search over (idle, activation, discount, per-pod
/// demand) minimizing the RMSE against the targets. Contention and noise
/// parameters keep their defaults.
CalibrationResult calibrate_usage_model(
    std::span<const CalibrationTarget> targets);

}  // namespace sdqn::sim
