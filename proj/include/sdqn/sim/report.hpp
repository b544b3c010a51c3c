#pragma once

#include <sdqn/sim/scenario.hpp>

#include <filesystem>
#include <string>

namespace sdqn::sim {

enum class ReportFormat { kCsv, kJson };

/// Writes a report to disk. CSV columns:
/// scheduler,trial,<node...>,avg_cpu_pct,seed followed by no footer; the
/// JSON form ("report_v1") carries the summary block as well.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

std::string report_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);

/// Parses a report_v1 JSON document back into a report (summary values
/// recomputable from the trials).
ExperimentReport parse_report_json(const std::string& text);

}  // namespace sdqn::sim
