#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;

std::string binary() {
    const char* bin = std::getenv("SDQN_BIN");
    EXPECT_NE(bin, nullptr) << "SDQN_BIN must point at the sdqn binary";
    return bin ? bin : "";
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() /
                         ("sdqn_cli_out_" + std::to_string(::getpid()) + ".txt");
    const std::string command =
        binary() + " " + args + " >" + out.string() + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    }
    std::ifstream in(out);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    fs::remove(out);
    return result;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "sdqn_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_quick_config() {
    const fs::path path = scratch_dir() / "quick.json";
    std::ofstream out(path);
    out << R"({
  "batch": {"count": 10, "cpu_demand": 80, "mem_demand": 64},
  "training": {"episodes": 3, "epsilon_decay_episodes": 2, "seed": 11},
  "trials": 2,
  "base_seed": 5
})";
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST(CliTest, HelpExitsZeroAndDocumentsSubcommands) {
    const auto result = run_cli("--help");
    EXPECT_EQ(result.exit_code, 0);
    for (const char* name :
         {"train", "compare", "calibrate", "gradcheck", "serve", "defaults"}) {
        EXPECT_NE(result.output.find(name), std::string::npos) << name;
    }
    // Every subcommand's --help also exits 0 and mentions its flags.
    EXPECT_EQ(run_cli("train --help").exit_code, 0);
    EXPECT_NE(run_cli("train --help").output.find("--out-weights"),
              std::string::npos);
    EXPECT_EQ(run_cli("serve --help").exit_code, 0);
    EXPECT_NE(run_cli("serve --help").output.find("--listen"),
              std::string::npos);
}

TEST(CliTest, DefaultsPrintsFullConfig) {
    const auto result = run_cli("defaults");
    EXPECT_EQ(result.exit_code, 0);
    const auto doc = nlohmann::json::parse(result.output);
    EXPECT_EQ(doc["reward"]["base"], 100.0);
    EXPECT_EQ(doc["reward"]["top_n_miss"], -50.0);
    EXPECT_EQ(doc["usage_model"]["idle_pct"], 5.0);
    EXPECT_EQ(doc["training"]["lr"], 0.001);
    EXPECT_EQ(doc["nodes"].size(), 4u);
}

TEST(CliTest, UnknownPolicyAndBadConfigExitTwo) {
    const auto bad_policy = run_cli("train --policy nadir --out-weights /tmp/w");
    EXPECT_EQ(bad_policy.exit_code, 2);

    const auto untrainable =
        run_cli("train --policy default --out-weights /tmp/w");
    EXPECT_EQ(untrainable.exit_code, 2);
    EXPECT_NE(untrainable.output.find("not trainable"), std::string::npos);

    const fs::path broken = scratch_dir() / "broken.json";
    {
        std::ofstream out(broken);
        out << "{\n  \"trials\": oops\n}";
    }
    const auto bad_config = run_cli("train --config " + broken.string() +
                                    " --policy sdqn --out-weights /tmp/w");
    EXPECT_EQ(bad_config.exit_code, 2);
    EXPECT_NE(bad_config.output.find("line"), std::string::npos);
}

TEST(CliTest, TrainIsDeterministicByteForByte) {
    const auto config = write_quick_config();
    const fs::path w1 = scratch_dir() / "a.weights";
    const fs::path w2 = scratch_dir() / "b.weights";
    const auto first = run_cli("train --config " + config.string() +
                               " --policy sdqn --out-weights " + w1.string());
    ASSERT_EQ(first.exit_code, 0) << first.output;
    const auto second = run_cli("train --config " + config.string() +
                                " --policy sdqn --out-weights " + w2.string());
    ASSERT_EQ(second.exit_code, 0) << second.output;
    EXPECT_EQ(slurp(w1), slurp(w2));
    EXPECT_FALSE(slurp(w1).empty());
    // learning curve written next to the weights
    EXPECT_TRUE(fs::exists(w1.string() + ".curve.csv"));
    const std::string curve = slurp(w1.string() + ".curve.csv");
    EXPECT_NE(curve.find("episode,epsilon,mean_reward,mean_loss"),
              std::string::npos);
}

TEST(CliTest, CompareRequiresAllWeights) {
    const auto config = write_quick_config();
    const fs::path dir = scratch_dir() / "partial";
    fs::create_directories(dir);
    const auto train = run_cli("train --config " + config.string() +
                               " --policy sdqn --out-weights " +
                               (dir / "sdqn.weights").string());
    ASSERT_EQ(train.exit_code, 0);
    const auto result = run_cli("compare --config " + config.string() +
                                " --weights-dir " + dir.string() + " --out " +
                                (dir / "out").string());
    EXPECT_EQ(result.exit_code, 3);
    EXPECT_NE(result.output.find("sdqn-n"), std::string::npos);
}

TEST(CliTest, CompareProducesRankingAndReports) {
    const auto config = write_quick_config();
    const fs::path dir = scratch_dir() / "full";
    fs::create_directories(dir);
    for (const char* policy : {"sdqn", "sdqn-n", "lstm", "transformer"}) {
        const auto result =
            run_cli("train --config " + config.string() + " --policy " +
                    policy + " --out-weights " +
                    (dir / (std::string(policy) + ".weights")).string());
        ASSERT_EQ(result.exit_code, 0) << result.output;
    }
    const fs::path out = dir / "reports";
    const auto result = run_cli("compare --config " + config.string() +
                                " --weights-dir " + dir.string() + " --out " +
                                out.string());
    ASSERT_EQ(result.exit_code, 0) << result.output;
    EXPECT_NE(result.output.find("ranking"), std::string::npos);
    for (const char* name :
         {"default", "random", "sdqn", "sdqn-n", "lstm", "transformer"}) {
        EXPECT_TRUE(fs::exists(out / (std::string(name) + ".csv"))) << name;
        EXPECT_TRUE(fs::exists(out / (std::string(name) + ".json"))) << name;
    }
    EXPECT_TRUE(fs::exists(out / "comparison.csv"));
    // exactly one row per policy plus the header
    std::istringstream rows(slurp(out / "comparison.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(rows, line)) {
        ++lines;
    }
    EXPECT_EQ(lines, 7);
}

TEST(CliTest, CompareUnwritableOutputExitsFour) {
    const auto config = write_quick_config();
    const fs::path dir = scratch_dir() / "full";  // weights from earlier test
    if (!fs::exists(dir / "sdqn.weights")) {
        for (const char* policy : {"sdqn", "sdqn-n", "lstm", "transformer"}) {
            fs::create_directories(dir);
            run_cli("train --config " + config.string() + " --policy " + policy +
                    " --out-weights " +
                    (dir / (std::string(policy) + ".weights")).string());
        }
    }
    const auto result = run_cli("compare --config " + config.string() +
                                " --weights-dir " + dir.string() +
                                " --out /proc/no-such-dir/reports");
    EXPECT_EQ(result.exit_code, 4);
}

TEST(CliTest, CalibrateFitsBundledTargets) {
    const fs::path targets =
        fs::path(SDQN_REPO_DIR) / "configs" / "calibration_targets.json";
    const fs::path out = scratch_dir() / "calibrated.json";
    const auto result = run_cli("calibrate --targets " + targets.string() +
                                " --out " + out.string());
    ASSERT_EQ(result.exit_code, 0) << result.output;
    EXPECT_NE(result.output.find("rmse"), std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(out));
    EXPECT_TRUE(doc.contains("usage_model"));
    EXPECT_TRUE(doc.contains("fit_rmse_pct"));

    // identical re-run
    const auto again = run_cli("calibrate --targets " + targets.string());
    EXPECT_EQ(again.exit_code, 0);
    EXPECT_NE(again.output.find("fitted usage model"), std::string::npos);
}

TEST(CliTest, CalibrateRejectsTooFewTargets) {
    const fs::path small = scratch_dir() / "small_targets.json";
    {
        std::ofstream out(small);
        out << R"({"targets": [{"distribution": [1,1,1,1],
                   "avg_cpu_pct": 20.0}]})";
    }
    EXPECT_EQ(run_cli("calibrate --targets " + small.string()).exit_code, 2);

    const fs::path empty = scratch_dir() / "empty_targets.json";
    {
        std::ofstream out(empty);
        out << R"({"targets": []})";
    }
    EXPECT_EQ(run_cli("calibrate --targets " + empty.string()).exit_code, 2);
}

TEST(CliTest, GradcheckPassesForEveryKindAndRejectsUnknown) {
    for (const char* kind : {"mlp", "lstm", "transformer"}) {
        const auto result = run_cli(std::string("gradcheck --kind ") + kind);
        EXPECT_EQ(result.exit_code, 0) << result.output;
        EXPECT_NE(result.output.find("max relative error"), std::string::npos);
    }
    EXPECT_EQ(run_cli("gradcheck --kind perceptron").exit_code, 2);
}

TEST(CliTest, ServeBadWeightsPathExitsThree) {
    const auto result = run_cli(
        "serve --policy sdqn --weights /nonexistent/w.weights "
        "--listen 127.0.0.1:18999");
    EXPECT_EQ(result.exit_code, 3);
}

TEST(CliTest, ServePortBusyExitsFive) {
    httplib::Server blocker;
    const int port = blocker.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread holder([&] { blocker.listen_after_bind(); });
    const auto result = run_cli("serve --policy default --listen 127.0.0.1:" +
                                std::to_string(port));
    EXPECT_EQ(result.exit_code, 5);
    blocker.stop();
    holder.join();
}

TEST(CliTest, ServeAnswersHealthzAndStopsCleanlyOnSigterm) {
    const int port = 18763;
    const pid_t pid = fork();
    ASSERT_GE(pid, 0);
    if (pid == 0) {
        const std::string listen = "127.0.0.1:" + std::to_string(port);
        execl(binary().c_str(), "sdqn", "serve", "--policy", "default",
              "--listen", listen.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    // Poll healthz until the server is up.
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(1);
    bool healthy = false;
    for (int i = 0; i < 50 && !healthy; ++i) {
        auto res = client.Get("/healthz");
        if (res && res->status == 200) {
            healthy = true;
            EXPECT_EQ(nlohmann::json::parse(res->body)["status"], "ok");
            EXPECT_EQ(nlohmann::json::parse(res->body)["policy"], "default");
        } else {
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
    }
    EXPECT_TRUE(healthy);

    kill(pid, SIGTERM);
    int status = 0;
    ASSERT_EQ(waitpid(pid, &status, 0), pid);
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
}
