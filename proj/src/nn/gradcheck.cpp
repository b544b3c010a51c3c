#include <sdqn/nn/gradcheck.hpp>

#include <sdqn/common/rng.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace sdqn::nn {

GradCheckResult gradient_check(ScorerKind kind, std::uint64_t seed, double h,
                               double abs_floor) {
    ParamStore params = init_params(kind, seed);
    std::array<double, kInputDim> x{};
    SplitMix64 rng(mix_seed(seed, 0x696e707574));
    for (double& value : x) {
        value = uniform_unit(rng);
    }

    const Evaluation eval = forward(kind, params, x);
    const GradStore analytic = backward(kind, params, eval, 1.0);

    GradCheckResult result;
    for (const auto& name : params.names()) {
        Param& p = params.at(name);
        const std::vector<double>& grad = analytic.at(name);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double saved = p.value[i];
            p.value[i] = saved + h;
            const double plus = forward(kind, params, x).value;
            p.value[i] = saved - h;
            const double minus = forward(kind, params, x).value;
            p.value[i] = saved;
            const double numeric = (plus - minus) / (2.0 * h);
            const double denom =
                std::max({std::abs(numeric), std::abs(grad[i]), abs_floor});
            const double rel = std::abs(numeric - grad[i]) / denom;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.worst_param = name + "[" + std::to_string(i) + "]";
            }
            ++result.checked;
        }
    }
    return result;
}

}  // namespace sdqn::nn
