#include <sdqn/nn/optimizer.hpp>

#include <cmath>
#include <stdexcept>

namespace sdqn::nn {

std::pair<double, double> mse_loss(double pred, double target) {
    if (!std::isfinite(pred) || !std::isfinite(target)) {
        throw std::invalid_argument("mse_loss: non-finite input");
    }
    const double diff = pred - target;
    return {diff * diff, 2.0 * diff};
}

void adam_step(ParamStore& params, const GradStore& grads,
               const AdamConfig& cfg) {
    params.set_step(params.step() + 1);
    const double t = static_cast<double>(params.step());
    const double bias1 = 1.0 - std::pow(cfg.beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.beta2, t);
    for (const auto& name : params.names()) {
        Param& p = params.at(name);
        auto it = grads.grads.find(name);
        if (it == grads.grads.end() || it->second.size() != p.size()) {
            throw std::invalid_argument("adam_step: gradient shape mismatch for " +
                                        name);
        }
        const std::vector<double>& grad = it->second;
        for (std::size_t i = 0; i < p.size(); ++i) {
            p.m[i] = cfg.beta1 * p.m[i] + (1.0 - cfg.beta1) * grad[i];
            p.v[i] = cfg.beta2 * p.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
            const double m_hat = p.m[i] / bias1;
            const double v_hat = p.v[i] / bias2;
            p.value[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

}  // namespace sdqn::nn
