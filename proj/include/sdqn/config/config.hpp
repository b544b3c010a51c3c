#pragma once

#include <sdqn/sim/calibration.hpp>
#include <sdqn/sim/scenario.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdqn::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses a scenario config document. Unknown keys are rejected; absent
/// sections fall back to defaults. Parse failures report the line number.
sim::Scenario parse_config(const std::string& text);
sim::Scenario load_config(const std::filesystem::path& path);

std::string config_to_json(const sim::Scenario& scenario);

/// Calibration targets file: {"targets": [{"distribution": [...],
/// "avg_cpu_pct": ...}, ...]}.
std::vector<sim::CalibrationTarget> load_targets(
    const std::filesystem::path& path);

/// Config fragment carrying fitted usage-model parameters and per-pod
/// demand, mergeable into a scenario config.
std::string calibration_to_json(const sim::CalibrationResult& result);

}  // namespace sdqn::config
