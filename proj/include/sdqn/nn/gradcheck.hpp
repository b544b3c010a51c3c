#pragma once

#include <sdqn/nn/scorer.hpp>

#include <cstdint>
#include <string>

namespace sdqn::nn {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t checked = 0;
};

/// Central finite differences on the scalar output versus backward(), over
/// seeded parameters and a seeded input in [0,1)^6. Relative error uses an
/// absolute floor so exactly-zero gradients compare cleanly.
GradCheckResult gradient_check(ScorerKind kind, std::uint64_t seed,
                               double h = 1e-5, double abs_floor = 1e-7);

}  // namespace sdqn::nn
