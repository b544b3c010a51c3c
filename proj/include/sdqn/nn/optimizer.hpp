#pragma once

#include <sdqn/nn/param_store.hpp>

#include <utility>

namespace sdqn::nn {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// loss = (pred - target)^2; returns (loss, dloss/dpred).
std::pair<double, double> mse_loss(double pred, double target);

/// One bias-corrected Adam update; advances the store's step counter.
void adam_step(ParamStore& params, const GradStore& grads,
               const AdamConfig& cfg = {});

}  // namespace sdqn::nn
