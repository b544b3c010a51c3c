#include <sdqn/sim/report.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdqn::sim {

namespace {

void require_nonempty(const ExperimentReport& report) {
    if (report.trials.empty()) {
        throw std::invalid_argument("report has no trials");
    }
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
    require_nonempty(report);
    std::ostringstream out;
    out << "scheduler,trial";
    for (std::size_t i = 0; i < report.node_names.size(); ++i) {
        out << ",slave" << i + 1;
    }
    out << ",avg_cpu_pct,seed\n";
    for (const auto& trial : report.trials) {
        out << report.scheduler << ',' << trial.trial;
        for (int count : trial.pod_counts) {
            out << ',' << count;
        }
        out << ',' << trial.avg_cpu_pct << ',' << trial.seed << '\n';
    }
    return out.str();
}

std::string report_to_json(const ExperimentReport& report) {
    require_nonempty(report);
    nlohmann::json doc;
    doc["format"] = "report_v1";
    doc["scheduler"] = report.scheduler;
    doc["nodes"] = report.node_names;
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& trial : report.trials) {
        trials.push_back({
            {"trial", trial.trial},
            {"seed", trial.seed},
            {"pod_counts", trial.pod_counts},
            {"node_cpu_pct", trial.node_cpu_pct},
            {"avg_cpu_pct", trial.avg_cpu_pct},
            {"active_nodes", trial.active_nodes},
            {"unschedulable", trial.unschedulable},
        });
    }
    doc["trials"] = std::move(trials);
    doc["summary"] = {
        {"mean_avg_cpu_pct", report.mean_avg_cpu_pct},
        {"cv_pct", report.cv_pct},
        {"mean_active_nodes", report.mean_active_nodes},
        {"min_active_nodes", report.min_active_nodes},
        {"max_active_nodes", report.max_active_nodes},
    };
    return doc.dump(2) + "\n";
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
    require_nonempty(report);
    const std::string text = format == ReportFormat::kCsv
                                 ? report_to_csv(report)
                                 : report_to_json(report);
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write report: " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("short write to report: " + path.string());
    }
}

ExperimentReport parse_report_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != "report_v1") {
        throw std::runtime_error("not a report_v1 document");
    }
    ExperimentReport report;
    report.scheduler = doc.at("scheduler").get<std::string>();
    report.node_names = doc.at("nodes").get<std::vector<std::string>>();
    for (const auto& entry : doc.at("trials")) {
        TrialResult trial;
        trial.trial = entry.at("trial").get<int>();
        trial.seed = entry.at("seed").get<std::uint64_t>();
        trial.pod_counts = entry.at("pod_counts").get<std::vector<int>>();
        trial.node_cpu_pct = entry.at("node_cpu_pct").get<std::vector<double>>();
        trial.avg_cpu_pct = entry.at("avg_cpu_pct").get<double>();
        trial.active_nodes = entry.at("active_nodes").get<int>();
        trial.unschedulable = entry.at("unschedulable").get<int>();
        report.trials.push_back(std::move(trial));
    }
    const auto& summary = doc.at("summary");
    report.mean_avg_cpu_pct = summary.at("mean_avg_cpu_pct").get<double>();
    report.cv_pct = summary.at("cv_pct").get<double>();
    report.mean_active_nodes = summary.at("mean_active_nodes").get<double>();
    report.min_active_nodes = summary.at("min_active_nodes").get<int>();
    report.max_active_nodes = summary.at("max_active_nodes").get<int>();
    return report;
}

}  // namespace sdqn::sim
