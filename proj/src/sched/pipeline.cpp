#include <sdqn/sched/pipeline.hpp>

#include <sdqn/rewards/features.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sdqn::sched {

std::vector<int> filter(const model::ClusterState& cluster,
                        const model::PodSpec& pod) {
    std::vector<int> ids;
    for (const auto& node : cluster.nodes) {
        ids.push_back(node.spec.node_id);
    }
    std::sort(ids.begin(), ids.end());
    std::vector<int> candidates;
    for (int id : ids) {
        if (model::feasible(cluster.node_by_id(id), pod, cluster.usage)) {
            candidates.push_back(id);
        }
    }
    return candidates;
}

double score_default(const model::ClusterState& cluster,
                     const model::PodSpec& pod, int node_id) {
    const model::NodeState& node = cluster.node_by_id(node_id);
    const double cpu_free =
        (100.0 - model::cpu_percent_after(node, pod, cluster.usage)) / 100.0;
    const double mem_free = (100.0 - model::mem_percent_after(node, pod)) / 100.0;
    return 100.0 * (cpu_free + mem_free) / 2.0;
}

double score_learned(const SchedulerPolicy& policy,
                     const model::ClusterState& cluster, int node_id) {
    if (!policy.params || !policy.scorer_kind) {
        throw std::logic_error("policy has no initialized scorer");
    }
    const auto features =
        rewards::extract_features(cluster.node_by_id(node_id), cluster.usage);
    const auto input = rewards::normalize(features);
    return nn::forward(*policy.scorer_kind, *policy.params, input).value;
}

int choose(std::span<const int> candidates, std::span<const double> scores,
           double epsilon, SplitMix64& rng, bool* epsilon_used) {
    if (candidates.empty()) {
        throw std::invalid_argument("choose: no candidates");
    }
    if (epsilon_used != nullptr) {
        *epsilon_used = false;
    }
    if (epsilon > 0.0 && uniform_unit(rng) < epsilon) {
        if (epsilon_used != nullptr) {
            *epsilon_used = true;
        }
        return candidates[uniform_index(rng, candidates.size())];
    }
    const double best = *std::max_element(scores.begin(), scores.end());
    std::vector<int> tied;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (scores[i] == best) {
            tied.push_back(candidates[i]);
        }
    }
    if (tied.size() == 1) {
        return tied.front();
    }
    return tied[uniform_index(rng, tied.size())];
}

rewards::DistributionContext make_distribution_context(
    const model::ClusterState& cluster, const model::PodSpec& pod,
    std::span<const int> candidates, int target_node_id,
    const rewards::RewardConfig& cfg) {
    rewards::DistributionContext ctx;
    ctx.candidate_count = static_cast<int>(candidates.size());
    ctx.target_node_id = target_node_id;
    ctx.target_running_pods =
        cluster.node_by_id(target_node_id).running_pods();
    ctx.top_n_ids =
        rewards::top_n_nodes(cluster, pod.batch_id, cfg.n_target, candidates);
    int batch_nodes = 0;
    bool target_counted = false;
    for (const auto& node : cluster.nodes) {
        if (node.batch_pod_count(pod.batch_id) > 0) {
            ++batch_nodes;
            if (node.spec.node_id == target_node_id) {
                target_counted = true;
            }
        }
    }
    // Hypothetical placement: the target hosts a batch pod afterwards.
    ctx.nodes_with_batch_pods = batch_nodes + (target_counted ? 0 : 1);
    return ctx;
}

namespace {

std::vector<double> score_candidates(const SchedulerPolicy& policy,
                                     const model::ClusterState& cluster,
                                     const model::PodSpec& pod,
                                     std::span<const int> candidates) {
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (int id : candidates) {
        switch (policy.kind) {
            case PolicyKind::kDefault:
                scores.push_back(score_default(cluster, pod, id));
                break;
            case PolicyKind::kRandom:
                // Equal scores; the tie-break picks uniformly.
                scores.push_back(0.0);
                break;
            default:
                scores.push_back(score_learned(policy, cluster, id));
                break;
        }
    }
    return scores;
}

}  // namespace

BatchResult schedule_batch(const SchedulerPolicy& policy,
                           model::ClusterState cluster,
                           std::span<const model::PodSpec> pods, double epsilon,
                           SplitMix64& rng, const PlacementHook& hook) {
    BatchResult result{std::move(cluster), {}};
    result.decisions.reserve(pods.size());
    for (const auto& pod : pods) {
        Decision decision;
        decision.pod_id = pod.pod_id;
        decision.candidates = filter(result.cluster, pod);
        if (decision.candidates.empty()) {
            result.decisions.push_back(std::move(decision));
            continue;
        }
        decision.scores =
            score_candidates(policy, result.cluster, pod, decision.candidates);
        decision.chosen_node_id =
            choose(decision.candidates, decision.scores, epsilon, rng,
                   &decision.epsilon_used);
        decision.ctx = make_distribution_context(result.cluster, pod,
                                                 decision.candidates,
                                                 decision.chosen_node_id,
                                                 policy.reward);
        if (is_learned(policy.kind)) {
            decision.chosen_input = rewards::normalize(rewards::extract_features(
                result.cluster.node_by_id(decision.chosen_node_id),
                result.cluster.usage));
        }
        model::place_pod(result.cluster, decision.chosen_node_id, pod);
        result.decisions.push_back(std::move(decision));
        if (hook) {
            hook(result.decisions.back(), result.cluster);
        }
    }
    return result;
}

}  // namespace sdqn::sched
