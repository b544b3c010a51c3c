#include <sdqn/common/rng.hpp>
#include <sdqn/rewards/features.hpp>
#include <sdqn/rewards/reward.hpp>

#include <gtest/gtest.h>

#include "support/test_builders.hpp"

using namespace sdqn;
using namespace sdqn::test;

namespace {

rewards::NodeFeatures features(double cpu, double mem, double pod_util,
                               int health = 1, double uptime = 30.0) {
    rewards::NodeFeatures f;
    f.cpu_pct = cpu;
    f.mem_pct = mem;
    f.pod_util_pct = pod_util;
    f.health = health;
    f.uptime_hours = uptime;
    f.running_pods = static_cast<int>(pod_util);  // unused by the rules
    return f;
}

rewards::DistributionContext spread_ctx(int nodes_with_batch) {
    rewards::DistributionContext ctx;
    ctx.nodes_with_batch_pods = nodes_with_batch;
    return ctx;
}

}  // namespace

// ============================================================
// extract_features / normalize
// ============================================================

TEST(FeaturesTest, EmptyReadyNode) {
    model::UsageModelParams usage;
    usage.idle_pct = 0.0;
    usage.activation_pct = 0.0;
    usage.noise_sigma_pct = 0.0;
    auto node = make_node(0);
    node.uptime_hours = 36.0;
    const auto f = rewards::extract_features(node, usage);
    EXPECT_DOUBLE_EQ(f.cpu_pct, 0.0);
    EXPECT_DOUBLE_EQ(f.mem_pct, 0.0);
    EXPECT_DOUBLE_EQ(f.pod_util_pct, 0.0);
    EXPECT_EQ(f.health, 1);
    EXPECT_DOUBLE_EQ(f.uptime_hours, 36.0);
    EXPECT_EQ(f.running_pods, 0);
}

TEST(FeaturesTest, PodUtilizationFollowsTableFormula) {
    model::UsageModelParams usage;
    auto node = make_node(0);
    node.spec.max_pods = 110;
    node.spec.mem_capacity = 1 << 20;
    fill_pods(node, 55, 10, 1);
    const auto f = rewards::extract_features(node, usage);
    EXPECT_DOUBLE_EQ(f.pod_util_pct, 50.0);
    EXPECT_EQ(f.running_pods, 55);
}

TEST(FeaturesTest, NotReadyNodeHasHealthZeroRegardlessOfLoad) {
    model::UsageModelParams usage;
    auto node = make_node(0);
    node.ready = false;
    fill_pods(node, 10);
    EXPECT_EQ(rewards::extract_features(node, usage).health, 0);
}

TEST(FeaturesTest, NormalizeScalesAndCaps) {
    rewards::NodeFeatures f;
    f.cpu_pct = 50.0;
    f.mem_pct = 50.0;
    f.pod_util_pct = 50.0;
    f.health = 1;
    f.uptime_hours = 36.0;
    f.running_pods = 55;
    const auto v = rewards::normalize(f);
    EXPECT_DOUBLE_EQ(v[0], 0.5);
    EXPECT_DOUBLE_EQ(v[1], 0.5);
    EXPECT_DOUBLE_EQ(v[2], 0.5);
    EXPECT_DOUBLE_EQ(v[3], 1.0);
    EXPECT_DOUBLE_EQ(v[4], 36.0 / 168.0);
    EXPECT_DOUBLE_EQ(v[5], 0.5);

    f.uptime_hours = 400.0;  // saturates at one week
    EXPECT_DOUBLE_EQ(rewards::normalize(f)[4], 1.0);

    rewards::NodeFeatures zero;
    const auto z = rewards::normalize(zero);
    for (int i = 0; i < 6; ++i) {
        EXPECT_DOUBLE_EQ(z[i], i == 3 ? 1.0 : 0.0);
    }
}

// ============================================================
// reward_sdqn: hand-derived cases
// ============================================================

TEST(RewardTest, HealthyMidBandCase) {
    const rewards::RewardConfig cfg;
    // 100 + 10 (cpu in band) + 10 (mem in band) + 20 (pod util in range)
    //     + 5 (uptime) + 0 (single batch node)
    EXPECT_DOUBLE_EQ(
        rewards::reward_sdqn(features(50, 50, 70), spread_ctx(1), cfg), 145.0);
}

TEST(RewardTest, UnhealthyLosesOneHundred) {
    const rewards::RewardConfig cfg;
    EXPECT_DOUBLE_EQ(
        rewards::reward_sdqn(features(50, 50, 70, 0), spread_ctx(1), cfg), 45.0);
}

TEST(RewardTest, OverThresholdSlopeAndSpread) {
    const rewards::RewardConfig cfg;
    // 100 - 2*(80-70) + 10 - 10 (pod util 50% outside band) - 5 (uptime 10h)
    //     + 10 (three batch nodes)
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(80, 50, 50, 1, 10.0),
                                          spread_ctx(3), cfg),
                     85.0);
}

TEST(RewardTest, BandBoundariesAreInclusive) {
    const rewards::RewardConfig cfg;
    const auto ctx = spread_ctx(1);
    const double base_line =
        rewards::reward_sdqn(features(50, 50, 70), ctx, cfg);  // 145

    // cpu exactly at both edges earns the band bonus.
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(40, 50, 70), ctx, cfg),
                     base_line);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(70, 50, 70), ctx, cfg),
                     base_line);
    // just outside
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(39.999, 50, 70), ctx, cfg),
                     base_line - 20.0);
    EXPECT_NEAR(rewards::reward_sdqn(features(70.001, 50, 70), ctx, cfg),
                base_line - 10.0 - 2.0 * 0.001, 1e-9);

    // memory edges mirror the cpu rule.
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(50, 40, 70), ctx, cfg),
                     base_line);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(50, 70, 70), ctx, cfg),
                     base_line);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(50, 39.999, 70), ctx, cfg),
                     base_line - 20.0);

    // pod utilization edges 0.6 and 0.9 inclusive.
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(50, 50, 60), ctx, cfg),
                     base_line);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(50, 50, 90), ctx, cfg),
                     base_line);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(50, 50, 59.99), ctx, cfg),
                     base_line - 30.0);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn(features(50, 50, 90.01), ctx, cfg),
                     base_line - 30.0);

    // uptime edge at 24h inclusive.
    EXPECT_DOUBLE_EQ(
        rewards::reward_sdqn(features(50, 50, 70, 1, 24.0), ctx, cfg),
        base_line);
    EXPECT_DOUBLE_EQ(
        rewards::reward_sdqn(features(50, 50, 70, 1, 23.99), ctx, cfg),
        base_line - 10.0);
}

TEST(RewardTest, SlopeAboveThresholdIsExactlyLinear) {
    const rewards::RewardConfig cfg;
    const auto ctx = spread_ctx(1);
    double previous =
        rewards::reward_sdqn(features(71, 50, 70), ctx, cfg);
    for (double cpu = 72.0; cpu <= 100.0; cpu += 1.0) {
        const double current =
            rewards::reward_sdqn(features(cpu, 50, 70), ctx, cfg);
        EXPECT_NEAR(current - previous, cfg.over_slope, 1e-9) << "cpu " << cpu;
        previous = current;
    }
}

TEST(RewardTest, RandomInputsStayInsideStaticBounds) {
    const rewards::RewardConfig cfg;
    const int nodes = 4;
    const double lo = cfg.base - 100.0 - 10.0 * 4 - 2.0 * 60.0;
    const double hi = cfg.base + 10.0 + 10.0 + 20.0 + 5.0 + 5.0 * (nodes - 1);
    SplitMix64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const auto f = features(100.0 * uniform_unit(rng),
                                100.0 * uniform_unit(rng),
                                100.0 * uniform_unit(rng),
                                uniform_index(rng, 2) == 0 ? 0 : 1,
                                200.0 * uniform_unit(rng));
        const auto ctx =
            spread_ctx(1 + static_cast<int>(uniform_index(rng, nodes)));
        const double r = rewards::reward_sdqn(f, ctx, cfg);
        EXPECT_GE(r, lo);
        EXPECT_LE(r, hi);
    }
}

// ============================================================
// reward_sdqn_n
// ============================================================

namespace {

rewards::DistributionContext top_n_ctx(int candidates, std::vector<int> top,
                                       int target, int running) {
    rewards::DistributionContext ctx;
    ctx.candidate_count = candidates;
    ctx.top_n_ids = std::move(top);
    ctx.target_node_id = target;
    ctx.target_running_pods = running;
    return ctx;
}

}  // namespace

TEST(RewardSdqnNTest, InsideTopTwoEarnsBonus) {
    const rewards::RewardConfig cfg;
    const auto ctx = top_n_ctx(4, {2, 0}, 2, 5);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn_n(features(50, 50, 70), ctx, cfg),
                     165.0);
}

TEST(RewardSdqnNTest, OutsideTopTwoLosesFifty) {
    const rewards::RewardConfig cfg;
    const auto ctx = top_n_ctx(4, {2, 0}, 3, 0);
    EXPECT_DOUBLE_EQ(rewards::reward_sdqn_n(features(50, 50, 70), ctx, cfg),
                     95.0);
}

TEST(RewardSdqnNTest, FallbackBranchUsesRunningPods) {
    const rewards::RewardConfig cfg;
    const auto f = features(50, 50, 70);
    // One candidate, pods already running: +20.
    EXPECT_DOUBLE_EQ(
        rewards::reward_sdqn_n(f, top_n_ctx(1, {0}, 0, 3), cfg), 165.0);
    // One candidate, empty node: -10.
    EXPECT_DOUBLE_EQ(
        rewards::reward_sdqn_n(f, top_n_ctx(1, {0}, 0, 0), cfg), 135.0);
}

TEST(RewardSdqnNTest, AgreesWithSdqnWhenTermsCoincide) {
    const rewards::RewardConfig cfg;
    SplitMix64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto f = features(100.0 * uniform_unit(rng),
                                100.0 * uniform_unit(rng),
                                100.0 * uniform_unit(rng),
                                uniform_index(rng, 2) == 0 ? 0 : 1,
                                100.0 * uniform_unit(rng));
        // Spread term of 5 distribution nodes equals the top-n hit (+20).
        const double a = rewards::reward_sdqn(f, spread_ctx(5), cfg);
        const double b =
            rewards::reward_sdqn_n(f, top_n_ctx(2, {0, 1}, 0, 1), cfg);
        EXPECT_DOUBLE_EQ(a, b);
    }
}

// ============================================================
// top_n_nodes
// ============================================================

TEST(TopNTest, RanksByBatchCountThenId) {
    auto cluster = make_cluster(4);
    fill_pods(cluster.nodes[0], 13);
    fill_pods(cluster.nodes[1], 13);
    fill_pods(cluster.nodes[2], 21);
    fill_pods(cluster.nodes[3], 3);
    const int candidates[] = {0, 1, 2, 3};
    const auto top = rewards::top_n_nodes(cluster, "batch-0", 2, candidates);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], 2);  // most batch pods
    EXPECT_EQ(top[1], 0);  // tie between 0 and 1 broken by id
}

TEST(TopNTest, AllZeroCountsFallBackToLowestIds) {
    auto cluster = make_cluster(4);
    const int candidates[] = {0, 1, 2, 3};
    const auto top = rewards::top_n_nodes(cluster, "batch-0", 2, candidates);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], 0);
    EXPECT_EQ(top[1], 1);
}

TEST(TopNTest, DegenerateSingleCandidate) {
    auto cluster = make_cluster(4);
    const int candidates[] = {2};
    const auto top = rewards::top_n_nodes(cluster, "batch-0", 2, candidates);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0], 2);
}

TEST(TopNTest, OnlyCurrentBatchCounts) {
    auto cluster = make_cluster(3);
    fill_pods(cluster.nodes[2], 10, 80, 64, "other-batch");
    fill_pods(cluster.nodes[1], 1);
    const int candidates[] = {0, 1, 2};
    const auto top = rewards::top_n_nodes(cluster, "batch-0", 2, candidates);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], 1);  // one batch-0 pod beats ten foreign pods
    EXPECT_EQ(top[1], 0);
}

TEST(TopNTest, DeterministicAcrossCalls) {
    auto cluster = make_cluster(4);
    fill_pods(cluster.nodes[1], 4);
    fill_pods(cluster.nodes[3], 4);
    const int candidates[] = {0, 1, 2, 3};
    const auto first = rewards::top_n_nodes(cluster, "batch-0", 3, candidates);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(rewards::top_n_nodes(cluster, "batch-0", 3, candidates),
                  first);
    }
}

TEST(RewardConfigTest, ValidationRejectsInvertedBands) {
    rewards::RewardConfig cfg;
    cfg.cpu_lo_pct = 80.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.podutil_lo = 0.95;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
