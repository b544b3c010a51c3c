#include <sdqn/config/config.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sdqn::config {

namespace {

using nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return line;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key \"" + key + "\" in " + where);
        }
    }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        out = obj.at(key).get<T>();
    }
}

void parse_usage(const json& obj, model::UsageModelParams& usage) {
    check_keys(obj, "usage_model",
               {"idle_pct", "activation_pct", "colocation_discount",
                "discount_cap", "contention_threshold_pct", "contention_gain",
                "noise_sigma_pct"});
    read_field(obj, "idle_pct", usage.idle_pct);
    read_field(obj, "activation_pct", usage.activation_pct);
    read_field(obj, "colocation_discount", usage.colocation_discount);
    read_field(obj, "discount_cap", usage.discount_cap);
    read_field(obj, "contention_threshold_pct", usage.contention_threshold_pct);
    read_field(obj, "contention_gain", usage.contention_gain);
    read_field(obj, "noise_sigma_pct", usage.noise_sigma_pct);
}

void parse_reward(const json& obj, rewards::RewardConfig& reward) {
    check_keys(obj, "reward",
               {"base", "unhealthy_penalty", "cpu_hi_pct", "cpu_lo_pct",
                "over_slope", "band_bonus", "band_miss", "podutil_lo",
                "podutil_hi", "podutil_bonus", "podutil_miss",
                "uptime_threshold_hours", "uptime_bonus", "uptime_miss",
                "spread_bonus_per_node", "n_target", "top_n_hit", "top_n_miss",
                "fallback_nonempty", "fallback_empty"});
    read_field(obj, "base", reward.base);
    read_field(obj, "unhealthy_penalty", reward.unhealthy_penalty);
    read_field(obj, "cpu_hi_pct", reward.cpu_hi_pct);
    read_field(obj, "cpu_lo_pct", reward.cpu_lo_pct);
    read_field(obj, "over_slope", reward.over_slope);
    read_field(obj, "band_bonus", reward.band_bonus);
    read_field(obj, "band_miss", reward.band_miss);
    read_field(obj, "podutil_lo", reward.podutil_lo);
    read_field(obj, "podutil_hi", reward.podutil_hi);
    read_field(obj, "podutil_bonus", reward.podutil_bonus);
    read_field(obj, "podutil_miss", reward.podutil_miss);
    read_field(obj, "uptime_threshold_hours", reward.uptime_threshold_hours);
    read_field(obj, "uptime_bonus", reward.uptime_bonus);
    read_field(obj, "uptime_miss", reward.uptime_miss);
    read_field(obj, "spread_bonus_per_node", reward.spread_bonus_per_node);
    read_field(obj, "n_target", reward.n_target);
    read_field(obj, "top_n_hit", reward.top_n_hit);
    read_field(obj, "top_n_miss", reward.top_n_miss);
    read_field(obj, "fallback_nonempty", reward.fallback_nonempty);
    read_field(obj, "fallback_empty", reward.fallback_empty);
}

void parse_training(const json& obj, sched::TrainingConfig& training) {
    check_keys(obj, "training",
               {"lr", "epsilon_start", "epsilon_end", "epsilon_decay_episodes",
                "episodes", "train_online", "replay_capacity", "seed"});
    read_field(obj, "lr", training.lr);
    read_field(obj, "epsilon_start", training.epsilon_start);
    read_field(obj, "epsilon_end", training.epsilon_end);
    read_field(obj, "epsilon_decay_episodes", training.epsilon_decay_episodes);
    read_field(obj, "episodes", training.episodes);
    read_field(obj, "train_online", training.train_online);
    read_field(obj, "replay_capacity", training.replay_capacity);
    read_field(obj, "seed", training.seed);
}

}  // namespace

sim::Scenario parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& error) {
        throw ConfigError("config parse error at line " +
                          std::to_string(line_of_offset(text, error.byte)) +
                          ": " + error.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config root must be an object");
    }
    check_keys(doc, "config root",
               {"nodes", "batch", "usage_model", "reward", "training", "trials",
                "base_seed"});

    sim::Scenario scenario = sim::default_scenario();
    if (doc.contains("nodes")) {
        scenario.nodes.clear();
        std::size_t index = 0;
        for (const auto& entry : doc.at("nodes")) {
            check_keys(entry, "nodes[" + std::to_string(index) + "]",
                       {"name", "cpu_capacity", "mem_capacity", "max_pods",
                        "ready", "uptime_hours"});
            sim::NodeConfig node;
            node.name = "slave" + std::to_string(index + 1);
            read_field(entry, "name", node.name);
            read_field(entry, "cpu_capacity", node.cpu_capacity);
            read_field(entry, "mem_capacity", node.mem_capacity);
            read_field(entry, "max_pods", node.max_pods);
            read_field(entry, "ready", node.ready);
            read_field(entry, "uptime_hours", node.uptime_hours);
            scenario.nodes.push_back(std::move(node));
            ++index;
        }
    }
    if (doc.contains("batch")) {
        const auto& batch = doc.at("batch");
        check_keys(batch, "batch", {"count", "cpu_demand", "mem_demand"});
        read_field(batch, "count", scenario.batch.count);
        read_field(batch, "cpu_demand", scenario.batch.cpu_demand);
        read_field(batch, "mem_demand", scenario.batch.mem_demand);
    }
    if (doc.contains("usage_model")) {
        parse_usage(doc.at("usage_model"), scenario.usage);
    }
    if (doc.contains("reward")) {
        parse_reward(doc.at("reward"), scenario.reward);
    }
    if (doc.contains("training")) {
        parse_training(doc.at("training"), scenario.training);
    }
    read_field(doc, "trials", scenario.trials);
    read_field(doc, "base_seed", scenario.base_seed);

    try {
        scenario.validate();
    } catch (const std::exception& error) {
        throw ConfigError(std::string("invalid config: ") + error.what());
    }
    return scenario;
}

sim::Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const sim::Scenario& scenario) {
    json nodes = json::array();
    for (const auto& node : scenario.nodes) {
        nodes.push_back({
            {"name", node.name},
            {"cpu_capacity", node.cpu_capacity},
            {"mem_capacity", node.mem_capacity},
            {"max_pods", node.max_pods},
            {"ready", node.ready},
            {"uptime_hours", node.uptime_hours},
        });
    }
    const json doc = {
        {"nodes", nodes},
        {"batch",
         {
             {"count", scenario.batch.count},
             {"cpu_demand", scenario.batch.cpu_demand},
             {"mem_demand", scenario.batch.mem_demand},
         }},
        {"usage_model",
         {
             {"idle_pct", scenario.usage.idle_pct},
             {"activation_pct", scenario.usage.activation_pct},
             {"colocation_discount", scenario.usage.colocation_discount},
             {"discount_cap", scenario.usage.discount_cap},
             {"contention_threshold_pct", scenario.usage.contention_threshold_pct},
             {"contention_gain", scenario.usage.contention_gain},
             {"noise_sigma_pct", scenario.usage.noise_sigma_pct},
         }},
        {"reward",
         {
             {"base", scenario.reward.base},
             {"unhealthy_penalty", scenario.reward.unhealthy_penalty},
             {"cpu_hi_pct", scenario.reward.cpu_hi_pct},
             {"cpu_lo_pct", scenario.reward.cpu_lo_pct},
             {"over_slope", scenario.reward.over_slope},
             {"band_bonus", scenario.reward.band_bonus},
             {"band_miss", scenario.reward.band_miss},
             {"podutil_lo", scenario.reward.podutil_lo},
             {"podutil_hi", scenario.reward.podutil_hi},
             {"podutil_bonus", scenario.reward.podutil_bonus},
             {"podutil_miss", scenario.reward.podutil_miss},
             {"uptime_threshold_hours", scenario.reward.uptime_threshold_hours},
             {"uptime_bonus", scenario.reward.uptime_bonus},
             {"uptime_miss", scenario.reward.uptime_miss},
             {"spread_bonus_per_node", scenario.reward.spread_bonus_per_node},
             {"n_target", scenario.reward.n_target},
             {"top_n_hit", scenario.reward.top_n_hit},
             {"top_n_miss", scenario.reward.top_n_miss},
             {"fallback_nonempty", scenario.reward.fallback_nonempty},
             {"fallback_empty", scenario.reward.fallback_empty},
         }},
        {"training",
         {
             {"lr", scenario.training.lr},
             {"epsilon_start", scenario.training.epsilon_start},
             {"epsilon_end", scenario.training.epsilon_end},
             {"epsilon_decay_episodes", scenario.training.epsilon_decay_episodes},
             {"episodes", scenario.training.episodes},
             {"train_online", scenario.training.train_online},
             {"replay_capacity", scenario.training.replay_capacity},
             {"seed", scenario.training.seed},
         }},
        {"trials", scenario.trials},
        {"base_seed", scenario.base_seed},
    };
    return doc.dump(2) + "\n";
}

std::vector<sim::CalibrationTarget> load_targets(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open targets file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& error) {
        throw ConfigError("targets parse error at line " +
                          std::to_string(line_of_offset(text, error.byte)) +
                          ": " + error.what());
    }
    check_keys(doc, "targets root", {"targets"});
    std::vector<sim::CalibrationTarget> targets;
    for (const auto& entry : doc.at("targets")) {
        check_keys(entry, "target", {"distribution", "avg_cpu_pct"});
        sim::CalibrationTarget target;
        target.distribution = entry.at("distribution").get<std::vector<int>>();
        target.avg_cpu_pct = entry.at("avg_cpu_pct").get<double>();
        targets.push_back(std::move(target));
    }
    return targets;
}

std::string calibration_to_json(const sim::CalibrationResult& result) {
    const json doc = {
        {"usage_model",
         {
             {"idle_pct", result.params.idle_pct},
             {"activation_pct", result.params.activation_pct},
             {"colocation_discount", result.params.colocation_discount},
             {"discount_cap", result.params.discount_cap},
             {"contention_threshold_pct",
              result.params.contention_threshold_pct},
             {"contention_gain", result.params.contention_gain},
             {"noise_sigma_pct", result.params.noise_sigma_pct},
         }},
        {"batch", {{"cpu_demand", result.cpu_demand_millicores}}},
        {"fit_rmse_pct", result.rmse},
    };
    return doc.dump(2) + "\n";
}

}  // namespace sdqn::config
