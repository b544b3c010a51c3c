#pragma once

#include <sdqn/nn/scorer.hpp>

#include <filesystem>
#include <string>
#include <utility>

namespace sdqn::nn {

// Weights file format "SDQN-W1": a text header
//   SDQN-W1 <kind> <array-count>
// followed by one block per array:
//   <name> <ndim> <dim...>
//   <values, one line, full precision>
inline constexpr const char* kWeightsFormatVersion = "SDQN-W1";

void save_params(const ParamStore& params, ScorerKind kind,
                 const std::filesystem::path& path);

std::pair<ParamStore, ScorerKind> load_params(const std::filesystem::path& path);

}  // namespace sdqn::nn
