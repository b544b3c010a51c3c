#pragma once

#include <sdqn/sched/pipeline.hpp>

#include <span>
#include <vector>

namespace sdqn::sched {

/// One online regression step against the policy's training target.
/// Returns the loss and stores the target in the decision.
double train_step(SchedulerPolicy& policy, Decision& decision,
                  const model::ClusterState& cluster_after);

/// Regression target for a decision, evaluated on the post-placement
/// state. DQN kinds regress to their reward rules; the sequence scorers
/// regress to the built-in least-allocated priority of the chosen node
/// (they imitate the default scheduler's scoring signal).
double training_target(const SchedulerPolicy& policy, const Decision& decision,
                       const model::ClusterState& cluster_after);

struct EpisodePoint {
    int episode = 0;
    double epsilon = 0.0;
    double mean_reward = 0.0;
    double mean_loss = 0.0;
};

/// Epsilon-greedy online training: per episode the cluster resets, the
/// batch is scheduled, and every placement triggers one Adam step.
std::vector<EpisodePoint> train_policy(SchedulerPolicy& policy,
                                       const model::ClusterState& initial,
                                       std::span<const model::PodSpec> batch,
                                       const TrainingConfig& cfg);

}  // namespace sdqn::sched
