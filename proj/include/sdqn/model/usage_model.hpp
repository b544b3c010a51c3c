#pragma once

#include <sdqn/model/node.hpp>

namespace sdqn::model {

/// Parametric CPU usage model for a node running no-op CPU-bound pods.
///
/// A node pays an idle floor, a one-time activation cost once it hosts any
/// pod, and a per-pod share of capacity that shrinks geometrically with
/// co-location (shared image cache and I/O). Load past the contention
/// threshold costs extra, quadratically. Observation noise is additive and
/// drawn by the caller so replays stay deterministic.
struct UsageModelParams {
    double idle_pct = 5.0;
    double activation_pct = 12.0;
    double colocation_discount = 0.02;  // delta, fraction in [0,1)
    int discount_cap = 25;              // K, discount stops deepening here
    double contention_threshold_pct = 70.0;
    double contention_gain = 0.5;
    double noise_sigma_pct = 1.0;

    void validate() const;
};

/// Deterministic (noise-free) CPU percent of a node.
double node_cpu_percent(const NodeState& node, const UsageModelParams& model);

/// CPU percent with a caller-supplied noise draw added, clamped to [0,100].
double node_cpu_percent(const NodeState& node, const UsageModelParams& model,
                        double noise_eps);

/// Noise-free CPU percent if `pod` were appended to the node.
double cpu_percent_after(const NodeState& node, const PodSpec& pod,
                         const UsageModelParams& model);

/// Memory percent; memory is linear in resident demand.
double node_mem_percent(const NodeState& node);

/// Memory percent if `pod` were appended.
double mem_percent_after(const NodeState& node, const PodSpec& pod);

}  // namespace sdqn::model
