#include <sdqn/rewards/features.hpp>

#include <algorithm>

namespace sdqn::rewards {

NodeFeatures extract_features(const model::NodeState& node,
                              const model::UsageModelParams& model) {
    NodeFeatures f;
    f.cpu_pct = model::node_cpu_percent(node, model);
    f.mem_pct = model::node_mem_percent(node);
    f.pod_util_pct =
        100.0 * node.running_pods() / static_cast<double>(node.spec.max_pods);
    f.health = node.ready ? 1 : 0;
    f.uptime_hours = node.uptime_hours;
    f.running_pods = node.running_pods();
    return f;
}

std::array<double, 6> normalize(const NodeFeatures& f) {
    return {
        f.cpu_pct / 100.0,
        f.mem_pct / 100.0,
        f.pod_util_pct / 100.0,
        static_cast<double>(f.health),
        std::min(f.uptime_hours, kUptimeCapHours) / kUptimeCapHours,
        f.pod_util_pct / 100.0,  // running / max_pods
    };
}

}  // namespace sdqn::rewards
