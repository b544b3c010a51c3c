#include <sdqn/extender/service.hpp>

#include <sdqn/nn/weights_io.hpp>

#include <httplib.h>
#include <json.hpp>

#include <iostream>

namespace sdqn::extender {

namespace {

using nlohmann::json;

NodeSnapshot parse_node(const json& entry) {
    NodeSnapshot node;
    node.name = entry.at("name").get<std::string>();
    node.cpu_capacity = entry.at("cpu_capacity").get<int>();
    node.mem_capacity = entry.at("mem_capacity").get<int>();
    node.max_pods = entry.at("max_pods").get<int>();
    node.ready = entry.at("ready").get<bool>();
    node.uptime_hours = entry.at("uptime_hours").get<double>();
    node.running_pods = entry.at("running_pods").get<int>();
    node.cpu_pct = entry.at("cpu_pct").get<double>();
    node.mem_pct = entry.at("mem_pct").get<double>();
    if (node.cpu_capacity <= 0 || node.mem_capacity <= 0 || node.max_pods < 1) {
        throw std::invalid_argument("node " + node.name + ": bad capacities");
    }
    if (node.cpu_pct < 0.0 || node.cpu_pct > 100.0 || node.mem_pct < 0.0 ||
        node.mem_pct > 100.0) {
        throw std::invalid_argument("node " + node.name +
                                    ": percents out of range");
    }
    return node;
}

json node_to_json(const NodeSnapshot& node) {
    return {
        {"name", node.name},
        {"cpu_capacity", node.cpu_capacity},
        {"mem_capacity", node.mem_capacity},
        {"max_pods", node.max_pods},
        {"ready", node.ready},
        {"uptime_hours", node.uptime_hours},
        {"running_pods", node.running_pods},
        {"cpu_pct", node.cpu_pct},
        {"mem_pct", node.mem_pct},
    };
}

}  // namespace

ExtenderArgs parse_extender_args(const std::string& body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& error) {
        throw std::invalid_argument(std::string("malformed body: ") +
                                    error.what());
    }
    try {
        ExtenderArgs args;
        const auto& pod = doc.at("pod");
        args.pod.name = pod.at("name").get<std::string>();
        args.pod.cpu_demand_millicores =
            pod.at("cpu_demand_millicores").get<int>();
        args.pod.mem_demand_mib = pod.at("mem_demand_mib").get<int>();
        if (args.pod.cpu_demand_millicores <= 0 || args.pod.mem_demand_mib <= 0) {
            throw std::invalid_argument("pod demands must be positive");
        }
        std::vector<std::string> seen;
        for (const auto& entry : doc.at("nodes")) {
            NodeSnapshot node = parse_node(entry);
            for (const auto& name : seen) {
                if (name == node.name) {
                    throw std::invalid_argument("duplicate node name: " +
                                                node.name);
                }
            }
            seen.push_back(node.name);
            args.nodes.push_back(std::move(node));
        }
        return args;
    } catch (const json::exception& error) {
        throw std::invalid_argument(std::string("malformed body: ") +
                                    error.what());
    }
}

std::string extender_args_to_json(const ExtenderArgs& args) {
    json nodes = json::array();
    for (const auto& node : args.nodes) {
        nodes.push_back(node_to_json(node));
    }
    const json doc = {
        {"pod",
         {
             {"name", args.pod.name},
             {"cpu_demand_millicores", args.pod.cpu_demand_millicores},
             {"mem_demand_mib", args.pod.mem_demand_mib},
         }},
        {"nodes", nodes},
    };
    return doc.dump(2) + "\n";
}

std::string filter_response(const ExtenderArgs& args,
                            const model::UsageModelParams& usage) {
    json survivors = json::array();
    json failed = json::object();
    for (const auto& node : args.nodes) {
        const std::string violation = snapshot_violation(node, args.pod, usage);
        if (violation.empty()) {
            survivors.push_back(node_to_json(node));
        } else {
            failed[node.name] = violation;
        }
    }
    const json doc = {{"nodes", survivors}, {"failed", failed}};
    return doc.dump();
}

std::string prioritize_response(const ExtenderArgs& args,
                                const sched::SchedulerPolicy& policy,
                                const model::UsageModelParams& usage) {
    std::vector<double> raw;
    raw.reserve(args.nodes.size());
    for (const auto& node : args.nodes) {
        raw.push_back(snapshot_score(policy, node, args.pod, usage));
    }
    const std::vector<int> priorities = rescale_to_priorities(raw);
    json list = json::array();
    for (std::size_t i = 0; i < args.nodes.size(); ++i) {
        list.push_back({{"host", args.nodes[i].name}, {"score", priorities[i]}});
    }
    return list.dump();
}

struct ExtenderService::Impl {
    httplib::Server server;
};

ExtenderService::ExtenderService(Options options)
    : options_(std::move(options)), impl_(std::make_shared<Impl>()) {
    // SO_REUSEADDR only: a second service on the same address must fail to
    // bind rather than share the port.
    impl_->server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
                   reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    auto initial = std::make_shared<Snapshot>();
    initial->policy_name = "none";
    state_ = std::move(initial);
}

void ExtenderService::load() {
    auto next = std::make_shared<Snapshot>();
    next->policy_name = options_.policy;
    const sched::PolicyKind kind = sched::parse_policy(options_.policy);
    next->policy = sched::make_policy(kind);
    if (sched::is_learned(kind)) {
        auto [params, scorer_kind] = nn::load_params(options_.weights_path);
        if (scorer_kind != *next->policy.scorer_kind) {
            throw std::runtime_error("weights file kind does not match policy " +
                                     options_.policy);
        }
        next->policy.params = std::move(params);
        next->weights_version = std::string(nn::kWeightsFormatVersion) + " " +
                                nn::scorer_kind_name(scorer_kind);
        next->mtime = std::filesystem::last_write_time(options_.weights_path);
    } else {
        next->weights_version = "builtin";
    }
    next->loaded = true;
    std::lock_guard<std::mutex> lock(mutex_);
    state_ = std::move(next);  // atomic swap under the lock
}

std::shared_ptr<const ExtenderService::Snapshot> ExtenderService::snapshot() {
    std::lock_guard<std::mutex> lock(mutex_);
    return state_;
}

void ExtenderService::maybe_reload() {
    // Throttled mtime poll; a changed weights file swaps the snapshot in.
    if (options_.weights_path.empty()) {
        return;
    }
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        if (now - last_reload_check_ < std::chrono::seconds(1)) {
            return;
        }
        last_reload_check_ = now;
        if (!state_->loaded) {
            return;
        }
    }
    std::error_code ec;
    const auto mtime =
        std::filesystem::last_write_time(options_.weights_path, ec);
    if (ec || mtime == snapshot()->mtime) {
        return;
    }
    try {
        load();
    } catch (const std::exception& error) {
        std::cerr << "weights reload failed: " << error.what() << '\n';
    }
}

ExtenderService::Reply ExtenderService::handle_filter(const std::string& body) {
    maybe_reload();
    try {
        const ExtenderArgs args = parse_extender_args(body);
        return {200, filter_response(args, options_.usage)};
    } catch (const std::invalid_argument& error) {
        return {400, json{{"error", error.what()}}.dump()};
    }
}

ExtenderService::Reply ExtenderService::handle_prioritize(
    const std::string& body) {
    maybe_reload();
    const auto snap = snapshot();
    if (!snap->loaded) {
        return {503, json{{"error", "no model loaded"}}.dump()};
    }
    try {
        const ExtenderArgs args = parse_extender_args(body);
        return {200, prioritize_response(args, snap->policy, options_.usage)};
    } catch (const std::invalid_argument& error) {
        return {400, json{{"error", error.what()}}.dump()};
    }
}

ExtenderService::Reply ExtenderService::handle_healthz() {
    const auto snap = snapshot();
    const json doc = {
        {"status", snap->loaded ? "ok" : "degraded"},
        {"policy", snap->policy_name},
        {"weights_version", snap->weights_version},
    };
    return {200, doc.dump()};
}

namespace {

void log_request(const httplib::Request& req, double millis,
                 const std::string& top_host) {
    std::cout << req.method << ' ' << req.path << ' ' << millis << "ms";
    if (!top_host.empty()) {
        std::cout << " top=" << top_host;
    }
    std::cout << '\n';
}

std::string top_host_of(const std::string& body) {
    try {
        const json doc = json::parse(body);
        int best = -1;
        std::string host;
        for (const auto& entry : doc) {
            if (entry.at("score").get<int>() > best) {
                best = entry.at("score").get<int>();
                host = entry.at("host").get<std::string>();
            }
        }
        return host;
    } catch (const json::exception&) {
        return {};
    }
}

}  // namespace

void ExtenderService::setup_routes() {
    auto& server = impl_->server;
    const bool log = options_.log_requests;
    server.Post("/filter", [this, log](const httplib::Request& req,
                                       httplib::Response& res) {
        const auto start = std::chrono::steady_clock::now();
        const Reply reply = handle_filter(req.body);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
        if (log) {
            const double millis =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
            log_request(req, millis, {});
        }
    });
    server.Post("/prioritize", [this, log](const httplib::Request& req,
                                           httplib::Response& res) {
        const auto start = std::chrono::steady_clock::now();
        const Reply reply = handle_prioritize(req.body);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
        if (log) {
            const double millis =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
            log_request(req, millis,
                        reply.status == 200 ? top_host_of(reply.body) : "");
        }
    });
    server.Get("/healthz", [this, log](const httplib::Request& req,
                                       httplib::Response& res) {
        const auto start = std::chrono::steady_clock::now();
        const Reply reply = handle_healthz();
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
        if (log) {
            const double millis =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
            log_request(req, millis, {});
        }
    });
}

bool ExtenderService::serve(const std::string& host, int port) {
    auto& server = impl_->server;
    if (!server.bind_to_port(host, port)) {
        return false;
    }
    setup_routes();
    return server.listen_after_bind();
}

int ExtenderService::bind_any_port(const std::string& host) {
    const int port = impl_->server.bind_to_any_port(host);
    if (port > 0) {
        setup_routes();
    }
    return port;
}

bool ExtenderService::serve_after_bind() {
    return impl_->server.listen_after_bind();
}

void ExtenderService::stop() { impl_->server.stop(); }

}  // namespace sdqn::extender
