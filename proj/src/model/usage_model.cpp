#include <sdqn/model/usage_model.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdqn::model {

void UsageModelParams::validate() const {
    if (colocation_discount < 0.0 || colocation_discount >= 1.0) {
        throw std::invalid_argument("colocation_discount must be in [0,1)");
    }
    if (contention_threshold_pct <= 0.0 || contention_threshold_pct > 100.0) {
        throw std::invalid_argument("contention_threshold_pct must be in (0,100]");
    }
    if (idle_pct < 0.0 || activation_pct < 0.0 || noise_sigma_pct < 0.0 ||
        contention_gain < 0.0) {
        throw std::invalid_argument("usage model percents must be >= 0");
    }
    if (discount_cap < 1) {
        throw std::invalid_argument("discount_cap must be >= 1");
    }
}

namespace {

double raw_cpu_with_pods(const NodeSpec& spec,
                         const std::vector<PodSpec>& pods,
                         const PodSpec* extra,
                         const UsageModelParams& model) {
    const std::size_t count = pods.size() + (extra != nullptr ? 1 : 0);
    double u = model.idle_pct;
    if (count >= 1) {
        u += model.activation_pct;
    }
    const double keep = 1.0 - model.colocation_discount;
    for (std::size_t k = 0; k < count; ++k) {
        const PodSpec& pod = k < pods.size() ? pods[k] : *extra;
        const double share = 100.0 * pod.cpu_demand / spec.cpu_capacity;
        const int exponent =
            static_cast<int>(std::min<std::size_t>(k, model.discount_cap));
        u += share * std::pow(keep, exponent);
    }
    return u;
}

double with_contention(double raw, const UsageModelParams& model) {
    const double excess = std::max(0.0, raw - model.contention_threshold_pct);
    return raw + model.contention_gain * excess * excess / 100.0;
}

}  // namespace

double node_cpu_percent(const NodeState& node, const UsageModelParams& model) {
    const double u = with_contention(
        raw_cpu_with_pods(node.spec, node.resident_pods, nullptr, model), model);
    return std::clamp(u, 0.0, 100.0);
}

double node_cpu_percent(const NodeState& node, const UsageModelParams& model,
                        double noise_eps) {
    const double u = with_contention(
        raw_cpu_with_pods(node.spec, node.resident_pods, nullptr, model), model);
    return std::clamp(u + noise_eps, 0.0, 100.0);
}

double cpu_percent_after(const NodeState& node, const PodSpec& pod,
                         const UsageModelParams& model) {
    const double u = with_contention(
        raw_cpu_with_pods(node.spec, node.resident_pods, &pod, model), model);
    return std::clamp(u, 0.0, 100.0);
}

double node_mem_percent(const NodeState& node) {
    const double pct =
        100.0 * static_cast<double>(node.total_mem_demand()) / node.spec.mem_capacity;
    return std::clamp(pct, 0.0, 100.0);
}

double mem_percent_after(const NodeState& node, const PodSpec& pod) {
    const double pct =
        100.0 * static_cast<double>(node.total_mem_demand() + pod.mem_demand) /
        node.spec.mem_capacity;
    return std::clamp(pct, 0.0, 100.0);
}

}  // namespace sdqn::model
