#pragma once

#include <sdqn/nn/scorer.hpp>
#include <sdqn/rewards/reward.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdqn::sched {

enum class PolicyKind { kDefault, kRandom, kSdqn, kSdqnN, kLstm, kTransformer };

std::string policy_name(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);
bool is_learned(PolicyKind kind);

struct TrainingConfig {
    double lr = 0.001;
    double epsilon_start = 0.3;
    double epsilon_end = 0.01;
    int epsilon_decay_episodes = 200;
    int episodes = 300;
    bool train_online = true;
    int replay_capacity = 0;  // 0 trains on the live sample only
    std::uint64_t seed = 7;

    void validate() const;
    double epsilon_at(int episode) const;
};

struct SchedulerPolicy {
    PolicyKind kind = PolicyKind::kDefault;
    std::optional<nn::ScorerKind> scorer_kind;
    std::optional<nn::ParamStore> params;
    rewards::RewardConfig reward;
    TrainingConfig training;
};

/// Builds a policy; learned kinds get a freshly initialized scorer seeded
/// from the training seed.
SchedulerPolicy make_policy(PolicyKind kind,
                            const rewards::RewardConfig& reward = {},
                            const TrainingConfig& training = {});

constexpr int kUnschedulable = -1;

struct Decision {
    std::string pod_id;
    int chosen_node_id = kUnschedulable;
    std::vector<int> candidates;
    std::vector<double> scores;  // parallel to candidates
    bool epsilon_used = false;
    std::optional<double> reward_target;
    std::array<double, 6> chosen_input{};  // network input at decision time
    rewards::DistributionContext ctx;

    bool unschedulable() const { return chosen_node_id == kUnschedulable; }
};

}  // namespace sdqn::sched
