#pragma once

#include <cstdint>
#include <string>

namespace sdqn::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;     // bad config, flags or policy
inline constexpr int kExitMissing = 3;   // required artifact absent
inline constexpr int kExitIo = 4;        // unwritable output
inline constexpr int kExitBind = 5;      // listen address busy

struct TrainArgs {
    std::string config_path;
    std::string policy;
    std::string out_weights;
    std::string curve_path;  // defaults to out_weights + ".curve.csv"
};

struct CompareArgs {
    std::string config_path;
    std::string weights_dir;
    std::string out_dir;
};

struct CalibrateArgs {
    std::string targets_path;
    std::string out_path;
};

struct GradCheckArgs {
    std::string kind;
    std::uint64_t seed = 1;
};

struct ServeArgs {
    std::string policy = "default";
    std::string weights_path;
    std::string listen = "127.0.0.1:8878";
    std::string config_path;  // optional, for the usage model
};

int cmd_train(const TrainArgs& args);
int cmd_compare(const CompareArgs& args);
int cmd_calibrate(const CalibrateArgs& args);
int cmd_gradcheck(const GradCheckArgs& args);
int cmd_serve(const ServeArgs& args);
int cmd_defaults();

/// Weights file name used inside a --weights-dir for a policy.
std::string weights_file_name(const std::string& policy);

}  // namespace sdqn::cli
