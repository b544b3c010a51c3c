#include "../src/cli/commands.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    using namespace sdqn::cli;

    CLI::App app{
        "sdqn: scheduler lab for compute-intensive pod placement\n"
        "Trains DQN-style node scorers, replays batch-deployment experiments\n"
        "in a deterministic cluster simulator, and serves the scorer behind\n"
        "the Kubernetes scheduler-extender webhook convention."};
    app.require_subcommand(1);

    TrainArgs train;
    auto* train_cmd =
        app.add_subcommand("train", "Train a learned scheduling policy");
    train_cmd->add_option("--config", train.config_path,
                          "Scenario config file (JSON); defaults apply when "
                          "omitted");
    train_cmd
        ->add_option("--policy", train.policy,
                     "Policy to train: sdqn | sdqn-n | lstm | transformer")
        ->required();
    train_cmd
        ->add_option("--out-weights", train.out_weights,
                     "Destination weights file")
        ->required();
    train_cmd->add_option("--curve", train.curve_path,
                          "Learning-curve CSV (default: <out-weights>"
                          ".curve.csv)");

    CompareArgs compare;
    auto* compare_cmd = app.add_subcommand(
        "compare", "Run every policy on a scenario and rank by mean CPU");
    compare_cmd->add_option("--config", compare.config_path,
                            "Scenario config file (JSON)");
    compare_cmd
        ->add_option("--weights-dir", compare.weights_dir,
                     "Directory holding <policy>.weights files")
        ->required();
    compare_cmd
        ->add_option("--out", compare.out_dir,
                     "Directory for per-policy reports and comparison.csv")
        ->required();

    CalibrateArgs calibrate;
    auto* calibrate_cmd = app.add_subcommand(
        "calibrate", "Fit the usage model to reported (distribution, "
                     "average-CPU) targets");
    calibrate_cmd
        ->add_option("--targets", calibrate.targets_path, "Targets JSON file")
        ->required();
    calibrate_cmd->add_option("--out", calibrate.out_path,
                              "Write a mergeable config fragment here");

    GradCheckArgs gradcheck;
    auto* gradcheck_cmd = app.add_subcommand(
        "gradcheck", "Verify scorer gradients against finite differences");
    gradcheck_cmd
        ->add_option("--kind", gradcheck.kind,
                     "Scorer kind: mlp | lstm | transformer")
        ->required();
    gradcheck_cmd->add_option("--seed", gradcheck.seed, "Seed (default 1)");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand(
        "serve", "Serve the scheduler-extender webhook endpoints");
    serve_cmd->add_option("--policy", serve.policy,
                          "Scoring policy (default | random | sdqn | sdqn-n | "
                          "lstm | transformer)");
    serve_cmd->add_option("--weights", serve.weights_path,
                          "Weights file for learned policies")
        ->envname("SDQN_WEIGHTS");
    serve_cmd->add_option("--listen", serve.listen,
                          "Listen address, host:port")
        ->envname("SDQN_LISTEN");
    serve_cmd->add_option("--config", serve.config_path,
                          "Scenario config supplying the usage model");

    auto* defaults_cmd = app.add_subcommand(
        "defaults", "Print the full default configuration as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*train_cmd) {
            return cmd_train(train);
        }
        if (*compare_cmd) {
            return cmd_compare(compare);
        }
        if (*calibrate_cmd) {
            return cmd_calibrate(calibrate);
        }
        if (*gradcheck_cmd) {
            return cmd_gradcheck(gradcheck);
        }
        if (*serve_cmd) {
            return cmd_serve(serve);
        }
        if (*defaults_cmd) {
            return cmd_defaults();
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
