#include "commands.hpp"

#include <sdqn/config/config.hpp>
#include <sdqn/extender/service.hpp>
#include <sdqn/nn/gradcheck.hpp>
#include <sdqn/nn/weights_io.hpp>
#include <sdqn/sched/trainer.hpp>
#include <sdqn/sim/experiment.hpp>
#include <sdqn/sim/report.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace sdqn::cli {

namespace fs = std::filesystem;

namespace {

sim::Scenario load_scenario_or_default(const std::string& path) {
    if (path.empty()) {
        return sim::default_scenario();
    }
    return config::load_config(path);
}

}  // namespace

std::string weights_file_name(const std::string& policy) {
    return policy + ".weights";
}

int cmd_train(const TrainArgs& args) {
    sim::Scenario scenario;
    try {
        scenario = load_scenario_or_default(args.config_path);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    }
    sched::PolicyKind kind;
    try {
        kind = sched::parse_policy(args.policy);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    }
    if (!sched::is_learned(kind)) {
        std::cerr << "error: policy is not trainable: " << args.policy << '\n';
        return kExitUsage;
    }

    auto policy = sched::make_policy(kind, scenario.reward, scenario.training);
    const auto cluster = scenario.make_cluster(scenario.base_seed);
    const auto batch = scenario.make_batch();
    const auto curve =
        sched::train_policy(policy, cluster, batch, scenario.training);

    try {
        nn::save_params(*policy.params, *policy.scorer_kind, args.out_weights);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitIo;
    }
    const std::string curve_path = args.curve_path.empty()
                                       ? args.out_weights + ".curve.csv"
                                       : args.curve_path;
    std::ofstream curve_out(curve_path);
    if (!curve_out) {
        std::cerr << "error: cannot write " << curve_path << '\n';
        return kExitIo;
    }
    curve_out << "episode,epsilon,mean_reward,mean_loss\n";
    for (const auto& point : curve) {
        curve_out << point.episode << ',' << point.epsilon << ','
                  << point.mean_reward << ',' << point.mean_loss << '\n';
    }
    std::cout << "trained " << args.policy << " for "
              << scenario.training.episodes << " episodes; weights: "
              << args.out_weights << '\n';
    if (!curve.empty()) {
        std::cout << "final mean reward " << std::fixed << std::setprecision(2)
                  << curve.back().mean_reward << ", mean loss "
                  << curve.back().mean_loss << '\n';
    }
    return kExitOk;
}

int cmd_compare(const CompareArgs& args) {
    sim::Scenario scenario;
    try {
        scenario = load_scenario_or_default(args.config_path);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    }

    std::map<sched::PolicyKind, nn::ParamStore> trained;
    const sched::PolicyKind learned[] = {
        sched::PolicyKind::kSdqn, sched::PolicyKind::kSdqnN,
        sched::PolicyKind::kLstm, sched::PolicyKind::kTransformer};
    for (sched::PolicyKind kind : learned) {
        const fs::path path =
            fs::path(args.weights_dir) / weights_file_name(policy_name(kind));
        if (!fs::exists(path)) {
            std::cerr << "error: missing weights for policy "
                      << policy_name(kind) << " (" << path.string() << ")\n";
            return kExitMissing;
        }
        try {
            trained.emplace(kind, nn::load_params(path).first);
        } catch (const std::exception& error) {
            std::cerr << "error: " << error.what() << '\n';
            return kExitMissing;
        }
    }

    const sim::Comparison comparison = sim::compare_all(scenario, trained);

    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    for (const auto& report : comparison.reports) {
        try {
            sim::emit_report(report, sim::ReportFormat::kCsv,
                             fs::path(args.out_dir) / (report.scheduler + ".csv"));
            sim::emit_report(report, sim::ReportFormat::kJson,
                             fs::path(args.out_dir) / (report.scheduler + ".json"));
        } catch (const std::exception& error) {
            std::cerr << "error: " << error.what() << '\n';
            return kExitIo;
        }
    }
    const fs::path summary_path = fs::path(args.out_dir) / "comparison.csv";
    std::ofstream summary(summary_path);
    if (!summary) {
        std::cerr << "error: cannot write " << summary_path.string() << '\n';
        return kExitIo;
    }
    summary << "policy,mean_avg_cpu_pct,cv_pct\n";
    for (const auto& row : comparison.ranking) {
        summary << row.scheduler << ',' << row.mean_avg_cpu_pct << ','
                << row.cv_pct << '\n';
    }

    std::cout << "ranking by mean average CPU (lowest first):\n";
    int rank = 1;
    for (const auto& row : comparison.ranking) {
        std::cout << "  " << rank++ << ". " << std::left << std::setw(12)
                  << row.scheduler << std::right << std::fixed
                  << std::setprecision(2) << row.mean_avg_cpu_pct
                  << "%  (cv " << row.cv_pct << "%)\n";
    }
    return kExitOk;
}

int cmd_calibrate(const CalibrateArgs& args) {
    std::vector<sim::CalibrationTarget> targets;
    try {
        targets = config::load_targets(args.targets_path);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    }
    if (targets.size() < 3) {
        std::cerr << "error: need at least 3 calibration targets, got "
                  << targets.size() << '\n';
        return kExitUsage;
    }
    const sim::CalibrationResult result = sim::calibrate_usage_model(targets);
    std::cout << "fitted usage model: idle " << result.params.idle_pct
              << "%, activation " << result.params.activation_pct
              << "%, colocation discount " << result.params.colocation_discount
              << ", per-pod demand " << result.cpu_demand_millicores << "m\n";
    std::cout << "fit rmse " << std::fixed << std::setprecision(3) << result.rmse
              << " percentage points over " << targets.size() << " targets\n";
    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path);
        if (!out) {
            std::cerr << "error: cannot write " << args.out_path << '\n';
            return kExitIo;
        }
        out << config::calibration_to_json(result);
    }
    return kExitOk;
}

int cmd_gradcheck(const GradCheckArgs& args) {
    nn::ScorerKind kind;
    try {
        kind = nn::parse_scorer_kind(args.kind);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    }
    const nn::GradCheckResult result = nn::gradient_check(kind, args.seed);
    std::cout << "gradcheck " << args.kind << " seed " << args.seed << ": "
              << result.checked << " params, max relative error "
              << std::scientific << std::setprecision(3)
              << result.max_rel_error;
    if (!result.worst_param.empty()) {
        std::cout << " at " << result.worst_param;
    }
    std::cout << '\n';
    return result.max_rel_error < 1e-4 ? kExitOk : kExitFailure;
}

namespace {

extender::ExtenderService* g_service = nullptr;

void handle_signal(int) {
    if (g_service != nullptr) {
        g_service->stop();
    }
}

}  // namespace

int cmd_serve(const ServeArgs& args) {
    extender::ExtenderService::Options options;
    options.policy = args.policy;
    options.weights_path = args.weights_path;
    try {
        if (!args.config_path.empty()) {
            options.usage = config::load_config(args.config_path).usage;
        }
        sched::parse_policy(args.policy);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitUsage;
    }

    extender::ExtenderService service(options);
    try {
        service.load();
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitMissing;
    }

    const auto colon = args.listen.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "error: listen address must be host:port\n";
        return kExitUsage;
    }
    const std::string host = args.listen.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(args.listen.substr(colon + 1));
    } catch (const std::exception&) {
        std::cerr << "error: bad port in " << args.listen << '\n';
        return kExitUsage;
    }

    g_service = &service;
    std::signal(SIGTERM, handle_signal);
    std::signal(SIGINT, handle_signal);
    std::cout << "serving policy " << args.policy << " on " << args.listen
              << '\n';
    if (!service.serve(host, port)) {
        std::cerr << "error: cannot bind " << args.listen << '\n';
        g_service = nullptr;
        return kExitBind;
    }
    g_service = nullptr;
    return kExitOk;
}

int cmd_defaults() {
    std::cout << config::config_to_json(sim::default_scenario());
    return kExitOk;
}

}  // namespace sdqn::cli
