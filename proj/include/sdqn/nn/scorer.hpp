#pragma once

#include <sdqn/nn/param_store.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sdqn::nn {

enum class ScorerKind { kMlpQ, kLstm, kTransformer };

constexpr int kInputDim = 6;
constexpr int kHiddenDim = 32;
constexpr int kHeads = 4;
constexpr int kHeadDim = kHiddenDim / kHeads;
constexpr int kFeedForwardDim = 64;
constexpr double kLayerNormEps = 1e-5;

std::string scorer_kind_name(ScorerKind kind);
ScorerKind parse_scorer_kind(const std::string& name);

struct MlpCache {
    std::array<double, kInputDim> x;
    std::vector<double> pre1;  // fc1 pre-activation
    std::vector<double> h1;    // relu output
};

struct LstmCache {
    std::array<double, kInputDim> x;
    std::vector<double> gates_pre;  // 4*hidden, order i f g o
    std::vector<double> gate_i, gate_f, gate_g, gate_o;
    std::vector<double> cell, tanh_cell, hidden;
};

struct LayerNormCache {
    std::vector<double> input;
    std::vector<double> normalized;  // (x - mean) / sqrt(var + eps)
    std::vector<double> output;
    double mean = 0.0;
    double rstd = 0.0;
};

struct TransformerCache {
    std::array<double, kInputDim> x;
    std::vector<double> embed;
    std::vector<double> q, k, v;
    std::array<double, kHeads> attn_logits;
    std::array<double, kHeads> attn_weights;  // softmax over one position
    std::vector<double> attn_proj;            // output projection of heads
    std::vector<double> resid1;
    LayerNormCache ln1;
    std::vector<double> ff_pre, ff_hidden, ff_out;
    std::vector<double> resid2;
    LayerNormCache ln2;
};

using ScorerCache = std::variant<MlpCache, LstmCache, TransformerCache>;

struct Evaluation {
    double value = 0.0;
    ScorerCache cache;
};

/// Seeded parameter initialization: weights uniform in
/// [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero, layer-norm gains one.
ParamStore init_params(ScorerKind kind, std::uint64_t seed);

/// Analytic parameter count for the architecture.
std::size_t param_count(ScorerKind kind);

/// Scores a 6-feature state. Throws on non-finite input.
Evaluation forward(ScorerKind kind, const ParamStore& params,
                   std::span<const double> x);

/// Exact reverse-mode gradients of `upstream * output` w.r.t. every
/// parameter, from a cache produced by the matching forward call.
GradStore backward(ScorerKind kind, const ParamStore& params,
                   const Evaluation& eval, double upstream);

}  // namespace sdqn::nn
