#include <sdqn/sched/pipeline.hpp>
#include <sdqn/sim/calibration.hpp>
#include <sdqn/sim/experiment.hpp>
#include <sdqn/sim/report.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "support/reference_tables.hpp"
#include "support/test_builders.hpp"

using namespace sdqn;
using namespace sdqn::test;

// ============================================================
// coefficient of variation
// ============================================================

TEST(CvTest, ReferenceFootersReproduceUnderPopulationConvention) {
    const auto dflt = averages_of(default_scheduler_rows());
    EXPECT_NEAR(sim::coefficient_of_variation(dflt), 2.95, 0.01);
    const auto dqn = averages_of(sdqn_rows());
    EXPECT_NEAR(sim::coefficient_of_variation(dqn), 4.67, 0.01);
    // Two more reference footers double-check the convention.
    EXPECT_NEAR(sim::coefficient_of_variation(averages_of(lstm_rows())), 5.35,
                0.01);
    EXPECT_NEAR(sim::coefficient_of_variation(averages_of(transformer_rows())),
                1.61, 0.01);
}

TEST(CvTest, ReferenceMeansMatchFooters) {
    auto mean = [](const std::vector<double>& v) {
        double sum = 0.0;
        for (double x : v) {
            sum += x;
        }
        return sum / v.size();
    };
    EXPECT_NEAR(mean(averages_of(default_scheduler_rows())), 30.87, 0.01);
    EXPECT_NEAR(mean(averages_of(sdqn_rows())), 27.21, 0.01);
}

TEST(CvTest, ConstantListHasZeroCv) {
    const double values[] = {4.2, 4.2, 4.2};
    EXPECT_DOUBLE_EQ(sim::coefficient_of_variation(values), 0.0);
}

TEST(CvTest, EmptyAndZeroMeanRejected) {
    EXPECT_THROW(sim::coefficient_of_variation({}), std::invalid_argument);
    const double zero_mean[] = {1.0, -1.0};
    EXPECT_THROW(sim::coefficient_of_variation(zero_mean),
                 std::invalid_argument);
}

// ============================================================
// trials and experiments
// ============================================================

namespace {

sim::Scenario quiet_scenario() {
    sim::Scenario s = sim::default_scenario();
    s.usage.noise_sigma_pct = 0.0;
    return s;
}

}  // namespace

TEST(TrialTest, ScriptedConsolidationMatchesClosedForm) {
    // (25,25,0,0) with no noise: the measured average must equal the
    // geometric-sum value computed independently here.
    sim::Scenario scenario = quiet_scenario();
    auto cluster = scenario.make_cluster(1);
    for (int i = 0; i < 50; ++i) {
        model::place_pod(cluster, i < 25 ? 0 : 1,
                         make_pod("p" + std::to_string(i),
                                  scenario.batch.cpu_demand,
                                  scenario.batch.mem_demand));
    }
    const auto observed = sim::measure_node_cpu(cluster, 1);
    double sum = 0.0;
    for (double v : observed) {
        sum += v;
    }
    const double share = 100.0 * scenario.batch.cpu_demand / 4000.0;
    const double delta = scenario.usage.colocation_discount;
    const double loaded = scenario.usage.idle_pct +
                          scenario.usage.activation_pct +
                          share * (1.0 - std::pow(1.0 - delta, 25)) / delta;
    const double expected =
        (2.0 * loaded + 2.0 * scenario.usage.idle_pct) / 4.0;
    EXPECT_NEAR(sum / 4.0, expected, 1e-9);
}

TEST(TrialTest, EmptyBatchAveragesIdleRoster) {
    sim::Scenario scenario = quiet_scenario();
    scenario.batch.count = 0;
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);
    const auto trial = sim::run_trial(scenario, policy, 7);
    EXPECT_DOUBLE_EQ(trial.avg_cpu_pct, scenario.usage.idle_pct);
    EXPECT_EQ(trial.active_nodes, 0);
}

TEST(TrialTest, SameSeedReplaysBitIdentically) {
    const sim::Scenario scenario = sim::default_scenario();
    const auto policy = sched::make_policy(sched::PolicyKind::kRandom);
    const auto a = sim::run_trial(scenario, policy, 42);
    const auto b = sim::run_trial(scenario, policy, 42);
    EXPECT_EQ(a.pod_counts, b.pod_counts);
    EXPECT_EQ(a.node_cpu_pct, b.node_cpu_pct);
    EXPECT_EQ(a.avg_cpu_pct, b.avg_cpu_pct);
}

TEST(TrialTest, PodRenamingDoesNotChangeResults) {
    sim::Scenario scenario = sim::default_scenario();
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);

    auto run = [&](bool renamed) {
        auto cluster = scenario.make_cluster(3);
        auto pods = scenario.make_batch();
        if (renamed) {
            for (auto& pod : pods) {
                pod.pod_id = "renamed-" + pod.pod_id;
            }
        }
        SplitMix64 rng(3);
        const auto batch =
            sched::schedule_batch(policy, std::move(cluster), pods, 0.0, rng);
        std::vector<int> counts;
        for (const auto& node : batch.cluster.nodes) {
            counts.push_back(node.running_pods());
        }
        return counts;
    };
    EXPECT_EQ(run(false), run(true));
}

TEST(ExperimentTest, ReportIsReproducibleAndMeanRecomputable) {
    sim::Scenario scenario = sim::default_scenario();
    scenario.trials = 5;
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);
    const auto a = sim::run_experiment(scenario, policy);
    const auto b = sim::run_experiment(scenario, policy);
    ASSERT_EQ(a.trials.size(), 5u);
    EXPECT_EQ(a.mean_avg_cpu_pct, b.mean_avg_cpu_pct);
    EXPECT_EQ(a.cv_pct, b.cv_pct);

    double mean = 0.0;
    for (const auto& trial : a.trials) {
        mean += trial.avg_cpu_pct;
    }
    mean /= a.trials.size();
    EXPECT_NEAR(a.mean_avg_cpu_pct, mean, 1e-9);
}

TEST(ExperimentTest, SingleTrialHasZeroCv) {
    sim::Scenario scenario = sim::default_scenario();
    scenario.trials = 1;
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);
    const auto report = sim::run_experiment(scenario, policy);
    EXPECT_DOUBLE_EQ(report.cv_pct, 0.0);
}

TEST(ExperimentTest, DefaultPolicyKeepsAllFourNodesActive) {
    sim::Scenario scenario = sim::default_scenario();
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);
    const auto report = sim::run_experiment(scenario, policy);
    for (const auto& trial : report.trials) {
        EXPECT_EQ(trial.active_nodes, 4) << "trial " << trial.trial;
        EXPECT_EQ(trial.unschedulable, 0);
    }
}

// ============================================================
// consolidation lemma
// ============================================================

TEST(ConsolidationTest, FewerActiveNodesMeansLowerAverage) {
    // Homogeneous roster, no noise, positive activation: random placements
    // of the same 50-pod batch, pairwise compared by active-node count.
    model::UsageModelParams usage;
    usage.noise_sigma_pct = 0.0;
    ASSERT_GT(usage.activation_pct, 0.0);

    SplitMix64 rng(271828);
    struct Placement {
        int active;
        double avg;
    };
    std::vector<Placement> placements;
    for (int round = 0; round < 100; ++round) {
        auto cluster = make_cluster(4, usage);
        const int subset_size = 1 + static_cast<int>(uniform_index(rng, 4));
        std::vector<int> subset;
        for (int i = 0; i < 4; ++i) {
            subset.push_back(i);
        }
        for (int i = 0; i < 4 - subset_size; ++i) {
            subset.erase(subset.begin() +
                         static_cast<long>(uniform_index(rng, subset.size())));
        }
        for (int p = 0; p < 50; ++p) {
            const int node = subset[uniform_index(rng, subset.size())];
            model::place_pod(cluster, node, make_pod("p" + std::to_string(p)));
        }
        placements.push_back({model::active_node_count(cluster),
                              model::cluster_avg_cpu(cluster)});
    }
    int compared = 0;
    for (const auto& a : placements) {
        for (const auto& b : placements) {
            if (a.active < b.active) {
                EXPECT_LT(a.avg, b.avg)
                    << a.active << " active at " << a.avg << " vs " << b.active
                    << " active at " << b.avg;
                ++compared;
            }
        }
    }
    EXPECT_GT(compared, 0);  // the generator produced varying active counts
}

// ============================================================
// calibration
// ============================================================

TEST(CalibrationTest, SingleGridPointTargetIsFitExactly) {
    model::UsageModelParams params;
    params.idle_pct = 4.0;
    params.activation_pct = 10.0;
    params.colocation_discount = 0.02;
    const int demand = 48;
    const std::vector<int> distribution = {20, 19, 9, 2};
    sim::CalibrationTarget target;
    target.distribution = distribution;
    target.avg_cpu_pct =
        sim::calibration_model_average(distribution, params, demand);

    const auto result = sim::calibrate_usage_model({&target, 1});
    EXPECT_NEAR(result.rmse, 0.0, 1e-9);
}

TEST(CalibrationTest, ConsolidatedCaseFitsStrictlyLower) {
    // Two targets: the spread reference run and the consolidated one. The
    // fitted model must reproduce the ordering.
    std::vector<sim::CalibrationTarget> targets = {
        {{20, 19, 9, 2}, 29.97},
        {{25, 25, 0, 0}, 22.01},
        {{25, 25, 0, 0}, 23.84},
    };
    const auto result = sim::calibrate_usage_model(targets);
    const std::vector<int> spread = {20, 19, 9, 2};
    const std::vector<int> consolidated = {25, 25, 0, 0};
    EXPECT_LT(sim::calibration_model_average(consolidated, result.params,
                                             result.cpu_demand_millicores),
              sim::calibration_model_average(spread, result.params,
                                             result.cpu_demand_millicores));
}

TEST(CalibrationTest, ReferenceTargetsFitWithinTolerance) {
    const auto targets = calibration_targets();
    ASSERT_EQ(targets.size(), 9u);
    const auto result = sim::calibrate_usage_model(targets);
    EXPECT_LE(result.rmse, 2.5);
    EXPECT_GT(result.cpu_demand_millicores, 0);
}

TEST(CalibrationTest, DeterministicGridOrder) {
    const auto targets = calibration_targets();
    const auto a = sim::calibrate_usage_model(targets);
    const auto b = sim::calibrate_usage_model(targets);
    EXPECT_EQ(a.rmse, b.rmse);
    EXPECT_EQ(a.cpu_demand_millicores, b.cpu_demand_millicores);
    EXPECT_EQ(a.params.idle_pct, b.params.idle_pct);
    EXPECT_EQ(a.params.activation_pct, b.params.activation_pct);
    EXPECT_EQ(a.params.colocation_discount, b.params.colocation_discount);
}

TEST(CalibrationTest, EmptyTargetsRejected) {
    EXPECT_THROW(sim::calibrate_usage_model({}), std::invalid_argument);
}

// ============================================================
// compare_all
// ============================================================

TEST(CompareTest, OneRowPerPolicyAndRerunIdentical) {
    sim::Scenario scenario = sim::default_scenario();
    scenario.trials = 2;
    std::map<sched::PolicyKind, nn::ParamStore> weights;
    for (auto kind : {sched::PolicyKind::kSdqn, sched::PolicyKind::kSdqnN,
                      sched::PolicyKind::kLstm, sched::PolicyKind::kTransformer}) {
        weights.emplace(kind,
                        *sched::make_policy(kind, scenario.reward,
                                            scenario.training)
                             .params);
    }
    const auto a = sim::compare_all(scenario, weights);
    EXPECT_EQ(a.reports.size(), 6u);
    EXPECT_EQ(a.ranking.size(), 6u);
    const auto b = sim::compare_all(scenario, weights);
    for (std::size_t i = 0; i < a.ranking.size(); ++i) {
        EXPECT_EQ(a.ranking[i].scheduler, b.ranking[i].scheduler);
        EXPECT_EQ(a.ranking[i].mean_avg_cpu_pct, b.ranking[i].mean_avg_cpu_pct);
    }

    std::map<sched::PolicyKind, nn::ParamStore> partial;
    EXPECT_THROW(sim::compare_all(scenario, partial), std::invalid_argument);
}

// ============================================================
// report emission
// ============================================================

TEST(ReportTest, CsvShapeMatchesContract) {
    sim::Scenario scenario = sim::default_scenario();
    scenario.trials = 2;
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);
    const auto report = sim::run_experiment(scenario, policy);
    const std::string csv = sim::report_to_csv(report);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "scheduler,trial,slave1,slave2,slave3,slave4,avg_cpu_pct,seed");
    // header + one line per trial
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(ReportTest, JsonRoundTripPreservesValues) {
    sim::Scenario scenario = sim::default_scenario();
    scenario.trials = 3;
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);
    const auto report = sim::run_experiment(scenario, policy);
    const auto parsed = sim::parse_report_json(sim::report_to_json(report));
    EXPECT_EQ(parsed.scheduler, report.scheduler);
    ASSERT_EQ(parsed.trials.size(), report.trials.size());
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        EXPECT_EQ(parsed.trials[i].pod_counts, report.trials[i].pod_counts);
        EXPECT_EQ(parsed.trials[i].avg_cpu_pct, report.trials[i].avg_cpu_pct);
        EXPECT_EQ(parsed.trials[i].seed, report.trials[i].seed);
    }
    EXPECT_EQ(parsed.mean_avg_cpu_pct, report.mean_avg_cpu_pct);
    EXPECT_EQ(parsed.cv_pct, report.cv_pct);
}

TEST(ReportTest, EmptyReportRejected) {
    sim::ExperimentReport report;
    report.scheduler = "default";
    EXPECT_THROW(sim::report_to_csv(report), std::invalid_argument);
    EXPECT_THROW(
        sim::emit_report(report, sim::ReportFormat::kJson, "/tmp/x.json"),
        std::invalid_argument);
}

TEST(ReportTest, UnwritablePathIsAnIoError) {
    sim::Scenario scenario = sim::default_scenario();
    scenario.trials = 1;
    const auto policy = sched::make_policy(sched::PolicyKind::kDefault);
    const auto report = sim::run_experiment(scenario, policy);
    EXPECT_THROW(sim::emit_report(report, sim::ReportFormat::kCsv,
                                  "/nonexistent-dir/report.csv"),
                 std::runtime_error);
}
