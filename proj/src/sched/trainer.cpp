#include <sdqn/sched/trainer.hpp>

#include <sdqn/nn/optimizer.hpp>
#include <sdqn/rewards/features.hpp>

#include <stdexcept>

namespace sdqn::sched {

double training_target(const SchedulerPolicy& policy, const Decision& decision,
                       const model::ClusterState& cluster_after) {
    if (decision.unschedulable()) {
        throw std::invalid_argument("no target for an unschedulable decision");
    }
    const model::NodeState& node =
        cluster_after.node_by_id(decision.chosen_node_id);
    if (policy.kind == PolicyKind::kLstm ||
        policy.kind == PolicyKind::kTransformer) {
        // The sequence scorers imitate the built-in priority: the chosen
        // node's least-allocated score, which after the placement is just
        // its free-capacity mean.
        const double cpu_free =
            (100.0 - model::node_cpu_percent(node, cluster_after.usage)) / 100.0;
        const double mem_free = (100.0 - model::node_mem_percent(node)) / 100.0;
        return 100.0 * (cpu_free + mem_free) / 2.0;
    }
    const auto features =
        rewards::extract_features(node, cluster_after.usage);
    if (policy.kind == PolicyKind::kSdqnN) {
        return rewards::reward_sdqn_n(features, decision.ctx, policy.reward);
    }
    return rewards::reward_sdqn(features, decision.ctx, policy.reward);
}

namespace {

double regress_pair(SchedulerPolicy& policy, std::span<const double> input,
                    double target) {
    const auto eval = nn::forward(*policy.scorer_kind, *policy.params, input);
    const auto [loss, dloss] = nn::mse_loss(eval.value, target);
    const auto grads =
        nn::backward(*policy.scorer_kind, *policy.params, eval, dloss);
    nn::AdamConfig adam;
    adam.lr = policy.training.lr;
    nn::adam_step(*policy.params, grads, adam);
    return loss;
}

}  // namespace

double train_step(SchedulerPolicy& policy, Decision& decision,
                  const model::ClusterState& cluster_after) {
    if (!is_learned(policy.kind) || !policy.params) {
        throw std::invalid_argument("train_step: policy is not trainable");
    }
    const double target = training_target(policy, decision, cluster_after);
    decision.reward_target = target;
    return regress_pair(policy, decision.chosen_input, target);
}

std::vector<EpisodePoint> train_policy(SchedulerPolicy& policy,
                                       const model::ClusterState& initial,
                                       std::span<const model::PodSpec> batch,
                                       const TrainingConfig& cfg) {
    if (!is_learned(policy.kind)) {
        throw std::invalid_argument("train_policy: policy is not trainable");
    }
    cfg.validate();
    std::vector<EpisodePoint> curve;
    curve.reserve(cfg.episodes);
    SplitMix64 rng(mix_seed(cfg.seed, 0x7261696e,
                            static_cast<std::uint64_t>(policy.kind)));

    // Optional replay: placements fill a ring buffer and each step trains
    // on a uniformly resampled pair instead of the live one.
    struct ReplaySample {
        std::array<double, 6> input;
        double target;
    };
    std::vector<ReplaySample> replay;
    std::size_t replay_cursor = 0;
    SplitMix64 replay_rng(mix_seed(cfg.seed, 0x7265706c61,
                                   static_cast<std::uint64_t>(policy.kind)));

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        const double epsilon = cfg.epsilon_at(episode);
        double reward_sum = 0.0;
        double loss_sum = 0.0;
        int steps = 0;
        schedule_batch(policy, initial, batch, epsilon, rng,
                       [&](Decision& decision, model::ClusterState& after) {
                           if (!cfg.train_online) {
                               decision.reward_target =
                                   training_target(policy, decision, after);
                           } else if (cfg.replay_capacity > 0) {
                               const double target =
                                   training_target(policy, decision, after);
                               decision.reward_target = target;
                               if (replay.size() <
                                   static_cast<std::size_t>(cfg.replay_capacity)) {
                                   replay.push_back(
                                       {decision.chosen_input, target});
                               } else {
                                   replay[replay_cursor] = {decision.chosen_input,
                                                            target};
                                   replay_cursor =
                                       (replay_cursor + 1) % replay.size();
                               }
                               const auto& sample =
                                   replay[uniform_index(replay_rng, replay.size())];
                               loss_sum += regress_pair(policy, sample.input,
                                                        sample.target);
                           } else {
                               loss_sum += train_step(policy, decision, after);
                           }
                           reward_sum += *decision.reward_target;
                           ++steps;
                       });
        EpisodePoint point;
        point.episode = episode;
        point.epsilon = epsilon;
        if (steps > 0) {
            point.mean_reward = reward_sum / steps;
            point.mean_loss = loss_sum / steps;
        }
        curve.push_back(point);
    }
    return curve;
}

}  // namespace sdqn::sched
