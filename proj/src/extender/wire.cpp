#include <sdqn/extender/wire.hpp>

#include <sdqn/nn/scorer.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdqn::extender {

std::string snapshot_violation(const NodeSnapshot& node, const PodSnapshot& pod,
                               const model::UsageModelParams& usage) {
    if (!node.ready) {
        return "unhealthy";
    }
    if (node.running_pods >= node.max_pods) {
        return "max pods";
    }
    const double mem_delta =
        100.0 * pod.mem_demand_mib / static_cast<double>(node.mem_capacity);
    if (node.mem_pct + mem_delta > 100.0) {
        return "memory capacity";
    }
    const double share =
        100.0 * pod.cpu_demand_millicores / static_cast<double>(node.cpu_capacity);
    const int exponent = std::min(node.running_pods, usage.discount_cap);
    const double marginal =
        share * std::pow(1.0 - usage.colocation_discount, exponent);
    if (node.cpu_pct + marginal > model::kCpuHeadroomPct) {
        return "cpu headroom";
    }
    return {};
}

rewards::NodeFeatures snapshot_features(const NodeSnapshot& node) {
    rewards::NodeFeatures f;
    f.cpu_pct = node.cpu_pct;
    f.mem_pct = node.mem_pct;
    f.pod_util_pct =
        100.0 * node.running_pods / static_cast<double>(node.max_pods);
    f.health = node.ready ? 1 : 0;
    f.uptime_hours = node.uptime_hours;
    f.running_pods = node.running_pods;
    return f;
}

std::vector<int> rescale_to_priorities(std::span<const double> raw) {
    std::vector<int> priorities(raw.size(), 10);
    if (raw.empty()) {
        return priorities;
    }
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi == lo) {
        return priorities;  // all equal
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        priorities[i] =
            static_cast<int>(std::lround(10.0 * (raw[i] - lo) / (hi - lo)));
    }
    return priorities;
}

double snapshot_score(const sched::SchedulerPolicy& policy,
                      const NodeSnapshot& node, const PodSnapshot& pod,
                      const model::UsageModelParams& usage) {
    switch (policy.kind) {
        case sched::PolicyKind::kDefault: {
            const double share = 100.0 * pod.cpu_demand_millicores /
                                 static_cast<double>(node.cpu_capacity);
            const int exponent = std::min(node.running_pods, usage.discount_cap);
            const double cpu_after =
                node.cpu_pct +
                share * std::pow(1.0 - usage.colocation_discount, exponent);
            const double mem_after =
                node.mem_pct + 100.0 * pod.mem_demand_mib /
                                   static_cast<double>(node.mem_capacity);
            const double cpu_free = (100.0 - std::min(cpu_after, 100.0)) / 100.0;
            const double mem_free = (100.0 - std::min(mem_after, 100.0)) / 100.0;
            return 100.0 * (cpu_free + mem_free) / 2.0;
        }
        case sched::PolicyKind::kRandom:
            return 0.0;
        default: {
            if (!policy.params || !policy.scorer_kind) {
                throw std::logic_error("no model loaded");
            }
            const auto input = rewards::normalize(snapshot_features(node));
            return nn::forward(*policy.scorer_kind, *policy.params, input).value;
        }
    }
}

}  // namespace sdqn::extender
