#include <sdqn/sched/policy.hpp>

#include <sdqn/common/rng.hpp>

#include <algorithm>
#include <stdexcept>

namespace sdqn::sched {

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::kDefault:
            return "default";
        case PolicyKind::kRandom:
            return "random";
        case PolicyKind::kSdqn:
            return "sdqn";
        case PolicyKind::kSdqnN:
            return "sdqn-n";
        case PolicyKind::kLstm:
            return "lstm";
        case PolicyKind::kTransformer:
            return "transformer";
    }
    throw std::logic_error("unknown policy kind");
}

PolicyKind parse_policy(const std::string& name) {
    if (name == "default") {
        return PolicyKind::kDefault;
    }
    if (name == "random") {
        return PolicyKind::kRandom;
    }
    if (name == "sdqn") {
        return PolicyKind::kSdqn;
    }
    if (name == "sdqn-n") {
        return PolicyKind::kSdqnN;
    }
    if (name == "lstm") {
        return PolicyKind::kLstm;
    }
    if (name == "transformer") {
        return PolicyKind::kTransformer;
    }
    throw std::invalid_argument("unknown policy: " + name);
}

bool is_learned(PolicyKind kind) {
    return kind == PolicyKind::kSdqn || kind == PolicyKind::kSdqnN ||
           kind == PolicyKind::kLstm || kind == PolicyKind::kTransformer;
}

void TrainingConfig::validate() const {
    if (epsilon_end < 0.0 || epsilon_start > 1.0 ||
        epsilon_end > epsilon_start) {
        throw std::invalid_argument(
            "epsilon schedule must satisfy 0 <= end <= start <= 1");
    }
    if (episodes < 0 || epsilon_decay_episodes < 0 || replay_capacity < 0) {
        throw std::invalid_argument("episode counts must be non-negative");
    }
    if (lr <= 0.0) {
        throw std::invalid_argument("lr must be positive");
    }
}

double TrainingConfig::epsilon_at(int episode) const {
    if (epsilon_decay_episodes <= 0 || episode >= epsilon_decay_episodes) {
        return epsilon_end;
    }
    const double t = static_cast<double>(episode) / epsilon_decay_episodes;
    return epsilon_start + t * (epsilon_end - epsilon_start);
}

namespace {

nn::ScorerKind scorer_for(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::kSdqn:
        case PolicyKind::kSdqnN:
            return nn::ScorerKind::kMlpQ;
        case PolicyKind::kLstm:
            return nn::ScorerKind::kLstm;
        case PolicyKind::kTransformer:
            return nn::ScorerKind::kTransformer;
        default:
            throw std::logic_error("policy has no scorer");
    }
}

}  // namespace

SchedulerPolicy make_policy(PolicyKind kind, const rewards::RewardConfig& reward,
                            const TrainingConfig& training) {
    reward.validate();
    training.validate();
    SchedulerPolicy policy;
    policy.kind = kind;
    policy.reward = reward;
    policy.training = training;
    if (is_learned(kind)) {
        policy.scorer_kind = scorer_for(kind);
        // Independent stream per policy so two policies sharing one config
        // seed do not start from correlated weights.
        policy.params = nn::init_params(
            *policy.scorer_kind,
            mix_seed(training.seed, static_cast<std::uint64_t>(kind)));
    }
    return policy;
}

}  // namespace sdqn::sched
