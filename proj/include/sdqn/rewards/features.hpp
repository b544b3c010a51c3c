#pragma once

#include <sdqn/model/cluster.hpp>

#include <array>

namespace sdqn::rewards {

/// The six-dimensional node state every scorer consumes.
struct NodeFeatures {
    double cpu_pct = 0.0;
    double mem_pct = 0.0;
    double pod_util_pct = 0.0;  // 100 * running / max_pods
    int health = 1;             // 1 iff Ready
    double uptime_hours = 0.0;
    int running_pods = 0;
};

// Uptime saturates at one week in the normalized vector.
constexpr double kUptimeCapHours = 168.0;

/// Noise-free feature snapshot of a node. Observation noise is a reporting
/// concern; features for scoring and reward evaluation stay deterministic.
NodeFeatures extract_features(const model::NodeState& node,
                              const model::UsageModelParams& model);

/// Scales features into [0,1] for network input.
std::array<double, 6> normalize(const NodeFeatures& features);

}  // namespace sdqn::rewards
