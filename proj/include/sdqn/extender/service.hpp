#pragma once

#include <sdqn/extender/wire.hpp>

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

namespace sdqn::extender {

/// Throws std::invalid_argument on a malformed body.
ExtenderArgs parse_extender_args(const std::string& body);

std::string extender_args_to_json(const ExtenderArgs& args);

/// Body of a /filter response: surviving nodes plus a map from failed node
/// name to the violated predicate.
std::string filter_response(const ExtenderArgs& args,
                            const model::UsageModelParams& usage);

/// Body of a /prioritize response: host priorities 0..10 in request order.
std::string prioritize_response(const ExtenderArgs& args,
                                const sched::SchedulerPolicy& policy,
                                const model::UsageModelParams& usage);

/// Scheduler-extender webhook endpoints over a frozen parameter snapshot.
/// The snapshot swaps atomically when the weights file changes on disk;
/// each request reads one consistent snapshot.
class ExtenderService {
  public:
    struct Options {
        std::string policy = "none";
        std::filesystem::path weights_path;
        model::UsageModelParams usage;
        bool log_requests = true;
    };

    explicit ExtenderService(Options options);

    /// Loads weights for learned policies. Throws when the file is missing
    /// or malformed.
    void load();

    struct Reply {
        int status = 200;
        std::string body;
    };

    Reply handle_filter(const std::string& body);
    Reply handle_prioritize(const std::string& body);
    Reply handle_healthz();

    /// Serves until stop(); returns false if the address cannot be bound.
    bool serve(const std::string& host, int port);

    /// Test support: bind an ephemeral port, then serve_after_bind() on a
    /// worker thread.
    int bind_any_port(const std::string& host);
    bool serve_after_bind();
    void stop();

  private:
    struct Snapshot {
        sched::SchedulerPolicy policy;
        bool loaded = false;
        std::string policy_name = "none";
        std::string weights_version;
        std::filesystem::file_time_type mtime{};
    };

    std::shared_ptr<const Snapshot> snapshot();
    void maybe_reload();
    void setup_routes();

    Options options_;
    std::mutex mutex_;
    std::shared_ptr<const Snapshot> state_;
    std::chrono::steady_clock::time_point last_reload_check_{};
    struct Impl;
    std::shared_ptr<Impl> impl_;  // httplib server
};

}  // namespace sdqn::extender
