#include <sdqn/nn/scorer.hpp>

#include <sdqn/common/rng.hpp>

#include <cmath>
#include <stdexcept>

namespace sdqn::nn {

namespace {

// y = W x, W row-major [rows, cols].
std::vector<double> matvec(const std::vector<double>& w, std::size_t rows,
                           std::size_t cols, std::span<const double> x) {
    std::vector<double> y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            acc += w[i * cols + j] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

void add_inplace(std::vector<double>& y, const std::vector<double>& b) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += b[i];
    }
}

// dW += dy xT, db += dy
void accumulate_affine(std::vector<double>& dw, std::vector<double>& db,
                       const std::vector<double>& dy,
                       std::span<const double> x) {
    const std::size_t cols = x.size();
    for (std::size_t i = 0; i < dy.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            dw[i * cols + j] += dy[i] * x[j];
        }
        db[i] += dy[i];
    }
}

// dx = WT dy
std::vector<double> matvec_transposed(const std::vector<double>& w,
                                      std::size_t rows, std::size_t cols,
                                      const std::vector<double>& dy) {
    std::vector<double> dx(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            dx[j] += w[i * cols + j] * dy[i];
        }
    }
    return dx;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LayerNormCache layer_norm(const std::vector<double>& x,
                          const std::vector<double>& gain,
                          const std::vector<double>& bias) {
    LayerNormCache c;
    c.input = x;
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double value : x) {
        mean += value;
    }
    mean /= n;
    double var = 0.0;
    for (double value : x) {
        var += (value - mean) * (value - mean);
    }
    var /= n;
    c.mean = mean;
    c.rstd = 1.0 / std::sqrt(var + kLayerNormEps);
    c.normalized.resize(x.size());
    c.output.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        c.normalized[i] = (x[i] - mean) * c.rstd;
        c.output[i] = gain[i] * c.normalized[i] + bias[i];
    }
    return c;
}

// Returns the gradient w.r.t. the layer input; accumulates dgain/dbias.
std::vector<double> layer_norm_backward(const LayerNormCache& c,
                                        const std::vector<double>& gain,
                                        const std::vector<double>& dy,
                                        std::vector<double>& dgain,
                                        std::vector<double>& dbias) {
    const std::size_t n = c.input.size();
    std::vector<double> dxhat(n);
    double mean_dxhat = 0.0;
    double mean_dxhat_xhat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dgain[i] += dy[i] * c.normalized[i];
        dbias[i] += dy[i];
        dxhat[i] = dy[i] * gain[i];
        mean_dxhat += dxhat[i];
        mean_dxhat_xhat += dxhat[i] * c.normalized[i];
    }
    mean_dxhat /= static_cast<double>(n);
    mean_dxhat_xhat /= static_cast<double>(n);
    std::vector<double> dx(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = c.rstd * (dxhat[i] - mean_dxhat -
                          c.normalized[i] * mean_dxhat_xhat);
    }
    return dx;
}

struct LayerDef {
    const char* name;
    std::vector<std::size_t> shape;
    std::size_t fan_in;  // 0 for constant init
    double constant = 0.0;
};

std::vector<LayerDef> layer_defs(ScorerKind kind) {
    const std::size_t in = kInputDim;
    const std::size_t hid = kHiddenDim;
    const std::size_t ff = kFeedForwardDim;
    switch (kind) {
        case ScorerKind::kMlpQ:
            return {
                {"fc1.w", {hid, in}, in},
                {"fc1.b", {hid}, 0},
                {"out.w", {1, hid}, hid},
                {"out.b", {1}, 0},
            };
        case ScorerKind::kLstm:
            return {
                {"lstm.w_ih", {4 * hid, in}, in},
                {"lstm.w_hh", {4 * hid, hid}, hid},
                {"lstm.b", {4 * hid}, 0},
                {"out.w", {1, hid}, hid},
                {"out.b", {1}, 0},
            };
        case ScorerKind::kTransformer:
            return {
                {"embed.w", {hid, in}, in},
                {"embed.b", {hid}, 0},
                {"attn.wq", {hid, hid}, hid},
                {"attn.bq", {hid}, 0},
                {"attn.wk", {hid, hid}, hid},
                {"attn.bk", {hid}, 0},
                {"attn.wv", {hid, hid}, hid},
                {"attn.bv", {hid}, 0},
                {"attn.wo", {hid, hid}, hid},
                {"attn.bo", {hid}, 0},
                {"ln1.g", {hid}, 0, 1.0},
                {"ln1.b", {hid}, 0},
                {"ff.w1", {ff, hid}, hid},
                {"ff.b1", {ff}, 0},
                {"ff.w2", {hid, ff}, ff},
                {"ff.b2", {hid}, 0},
                {"ln2.g", {hid}, 0, 1.0},
                {"ln2.b", {hid}, 0},
                {"out.w", {1, hid}, hid},
                {"out.b", {1}, 0},
            };
    }
    throw std::logic_error("unknown scorer kind");
}

void check_input(std::span<const double> x) {
    if (x.size() != kInputDim) {
        throw std::invalid_argument("invalid input: expected 6 features");
    }
    for (double value : x) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument("invalid input: non-finite feature");
        }
    }
}

}  // namespace

std::string scorer_kind_name(ScorerKind kind) {
    switch (kind) {
        case ScorerKind::kMlpQ:
            return "mlp";
        case ScorerKind::kLstm:
            return "lstm";
        case ScorerKind::kTransformer:
            return "transformer";
    }
    throw std::logic_error("unknown scorer kind");
}

ScorerKind parse_scorer_kind(const std::string& name) {
    if (name == "mlp") {
        return ScorerKind::kMlpQ;
    }
    if (name == "lstm") {
        return ScorerKind::kLstm;
    }
    if (name == "transformer") {
        return ScorerKind::kTransformer;
    }
    throw std::invalid_argument("unknown scorer kind: " + name);
}

ParamStore init_params(ScorerKind kind, std::uint64_t seed) {
    ParamStore store;
    const auto defs = layer_defs(kind);
    for (std::size_t index = 0; index < defs.size(); ++index) {
        const LayerDef& def = defs[index];
        std::size_t count = 1;
        for (std::size_t d : def.shape) {
            count *= d;
        }
        std::vector<double> values(count, def.constant);
        double bound = 0.0;
        if (def.fan_in > 0) {
            bound = 1.0 / std::sqrt(static_cast<double>(def.fan_in));
            SplitMix64 rng(mix_seed(seed, 0x5d0c9e, index));
            for (double& value : values) {
                value = (2.0 * uniform_unit(rng) - 1.0) * bound;
            }
        }
        store.add(def.name, def.shape, std::move(values), bound);
    }
    return store;
}

std::size_t param_count(ScorerKind kind) {
    std::size_t total = 0;
    for (const auto& def : layer_defs(kind)) {
        std::size_t count = 1;
        for (std::size_t d : def.shape) {
            count *= d;
        }
        total += count;
    }
    return total;
}

Evaluation forward(ScorerKind kind, const ParamStore& params,
                   std::span<const double> x) {
    check_input(x);
    switch (kind) {
        case ScorerKind::kMlpQ: {
            MlpCache c;
            std::copy(x.begin(), x.end(), c.x.begin());
            c.pre1 = matvec(params.at("fc1.w").value, kHiddenDim, kInputDim, x);
            add_inplace(c.pre1, params.at("fc1.b").value);
            c.h1 = c.pre1;
            for (double& value : c.h1) {
                value = std::max(0.0, value);
            }
            double y = params.at("out.b").value[0];
            const auto& w = params.at("out.w").value;
            for (int i = 0; i < kHiddenDim; ++i) {
                y += w[i] * c.h1[i];
            }
            return {y, std::move(c)};
        }
        case ScorerKind::kLstm: {
            LstmCache c;
            std::copy(x.begin(), x.end(), c.x.begin());
            // Single step from zero initial hidden and cell state.
            const std::vector<double> h_prev(kHiddenDim, 0.0);
            const std::vector<double> c_prev(kHiddenDim, 0.0);
            c.gates_pre =
                matvec(params.at("lstm.w_ih").value, 4 * kHiddenDim, kInputDim, x);
            const auto recurrent = matvec(params.at("lstm.w_hh").value,
                                          4 * kHiddenDim, kHiddenDim, h_prev);
            add_inplace(c.gates_pre, recurrent);
            add_inplace(c.gates_pre, params.at("lstm.b").value);
            c.gate_i.resize(kHiddenDim);
            c.gate_f.resize(kHiddenDim);
            c.gate_g.resize(kHiddenDim);
            c.gate_o.resize(kHiddenDim);
            c.cell.resize(kHiddenDim);
            c.tanh_cell.resize(kHiddenDim);
            c.hidden.resize(kHiddenDim);
            for (int i = 0; i < kHiddenDim; ++i) {
                c.gate_i[i] = sigmoid(c.gates_pre[i]);
                c.gate_f[i] = sigmoid(c.gates_pre[kHiddenDim + i]);
                c.gate_g[i] = std::tanh(c.gates_pre[2 * kHiddenDim + i]);
                c.gate_o[i] = sigmoid(c.gates_pre[3 * kHiddenDim + i]);
                c.cell[i] = c.gate_f[i] * c_prev[i] + c.gate_i[i] * c.gate_g[i];
                c.tanh_cell[i] = std::tanh(c.cell[i]);
                c.hidden[i] = c.gate_o[i] * c.tanh_cell[i];
            }
            double y = params.at("out.b").value[0];
            const auto& w = params.at("out.w").value;
            for (int i = 0; i < kHiddenDim; ++i) {
                y += w[i] * c.hidden[i];
            }
            return {y, std::move(c)};
        }
        case ScorerKind::kTransformer: {
            TransformerCache c;
            std::copy(x.begin(), x.end(), c.x.begin());
            c.embed = matvec(params.at("embed.w").value, kHiddenDim, kInputDim, x);
            add_inplace(c.embed, params.at("embed.b").value);

            c.q = matvec(params.at("attn.wq").value, kHiddenDim, kHiddenDim, c.embed);
            add_inplace(c.q, params.at("attn.bq").value);
            c.k = matvec(params.at("attn.wk").value, kHiddenDim, kHiddenDim, c.embed);
            add_inplace(c.k, params.at("attn.bk").value);
            c.v = matvec(params.at("attn.wv").value, kHiddenDim, kHiddenDim, c.embed);
            add_inplace(c.v, params.at("attn.bv").value);

            // Self-attention over a single position: the softmax is over one
            // logit per head, so every attention weight is exactly 1 and the
            // context equals V.
            const double scale = 1.0 / std::sqrt(static_cast<double>(kHeadDim));
            std::vector<double> context(kHiddenDim);
            for (int h = 0; h < kHeads; ++h) {
                double logit = 0.0;
                for (int d = 0; d < kHeadDim; ++d) {
                    logit += c.q[h * kHeadDim + d] * c.k[h * kHeadDim + d];
                }
                c.attn_logits[h] = logit * scale;
                c.attn_weights[h] = std::exp(c.attn_logits[h] - c.attn_logits[h]);
                for (int d = 0; d < kHeadDim; ++d) {
                    context[h * kHeadDim + d] =
                        c.attn_weights[h] * c.v[h * kHeadDim + d];
                }
            }
            c.attn_proj =
                matvec(params.at("attn.wo").value, kHiddenDim, kHiddenDim, context);
            add_inplace(c.attn_proj, params.at("attn.bo").value);

            c.resid1.resize(kHiddenDim);
            for (int i = 0; i < kHiddenDim; ++i) {
                c.resid1[i] = c.embed[i] + c.attn_proj[i];
            }
            c.ln1 = layer_norm(c.resid1, params.at("ln1.g").value,
                               params.at("ln1.b").value);

            c.ff_pre = matvec(params.at("ff.w1").value, kFeedForwardDim,
                              kHiddenDim, c.ln1.output);
            add_inplace(c.ff_pre, params.at("ff.b1").value);
            c.ff_hidden = c.ff_pre;
            for (double& value : c.ff_hidden) {
                value = std::max(0.0, value);
            }
            c.ff_out = matvec(params.at("ff.w2").value, kHiddenDim,
                              kFeedForwardDim, c.ff_hidden);
            add_inplace(c.ff_out, params.at("ff.b2").value);

            c.resid2.resize(kHiddenDim);
            for (int i = 0; i < kHiddenDim; ++i) {
                c.resid2[i] = c.ln1.output[i] + c.ff_out[i];
            }
            c.ln2 = layer_norm(c.resid2, params.at("ln2.g").value,
                               params.at("ln2.b").value);

            double y = params.at("out.b").value[0];
            const auto& w = params.at("out.w").value;
            for (int i = 0; i < kHiddenDim; ++i) {
                y += w[i] * c.ln2.output[i];
            }
            return {y, std::move(c)};
        }
    }
    throw std::logic_error("unknown scorer kind");
}

GradStore backward(ScorerKind kind, const ParamStore& params,
                   const Evaluation& eval, double upstream) {
    GradStore g = params.make_grads();
    switch (kind) {
        case ScorerKind::kMlpQ: {
            const auto& c = std::get<MlpCache>(eval.cache);
            auto& dw_out = g.at("out.w");
            auto& db_out = g.at("out.b");
            db_out[0] = upstream;
            std::vector<double> dh(kHiddenDim);
            const auto& w_out = params.at("out.w").value;
            for (int i = 0; i < kHiddenDim; ++i) {
                dw_out[i] = upstream * c.h1[i];
                dh[i] = upstream * w_out[i];
            }
            std::vector<double> dpre(kHiddenDim);
            for (int i = 0; i < kHiddenDim; ++i) {
                dpre[i] = c.pre1[i] > 0.0 ? dh[i] : 0.0;
            }
            accumulate_affine(g.at("fc1.w"), g.at("fc1.b"), dpre,
                              std::span<const double>(c.x));
            return g;
        }
        case ScorerKind::kLstm: {
            const auto& c = std::get<LstmCache>(eval.cache);
            auto& dw_out = g.at("out.w");
            auto& db_out = g.at("out.b");
            db_out[0] = upstream;
            std::vector<double> dhidden(kHiddenDim);
            const auto& w_out = params.at("out.w").value;
            for (int i = 0; i < kHiddenDim; ++i) {
                dw_out[i] = upstream * c.hidden[i];
                dhidden[i] = upstream * w_out[i];
            }
            // c_prev is zero, so the forget-gate path carries no gradient.
            std::vector<double> dgates(4 * kHiddenDim, 0.0);
            for (int i = 0; i < kHiddenDim; ++i) {
                const double d_o = dhidden[i] * c.tanh_cell[i];
                const double d_cell = dhidden[i] * c.gate_o[i] *
                                      (1.0 - c.tanh_cell[i] * c.tanh_cell[i]);
                const double d_i = d_cell * c.gate_g[i];
                const double d_g = d_cell * c.gate_i[i];
                dgates[i] = d_i * c.gate_i[i] * (1.0 - c.gate_i[i]);
                dgates[kHiddenDim + i] = 0.0;
                dgates[2 * kHiddenDim + i] =
                    d_g * (1.0 - c.gate_g[i] * c.gate_g[i]);
                dgates[3 * kHiddenDim + i] = d_o * c.gate_o[i] * (1.0 - c.gate_o[i]);
            }
            accumulate_affine(g.at("lstm.w_ih"), g.at("lstm.b"), dgates,
                              std::span<const double>(c.x));
            // lstm.w_hh multiplies the zero initial hidden state; its
            // gradient stays zero.
            return g;
        }
        case ScorerKind::kTransformer: {
            const auto& c = std::get<TransformerCache>(eval.cache);
            auto& dw_out = g.at("out.w");
            g.at("out.b")[0] = upstream;
            std::vector<double> dln2_out(kHiddenDim);
            const auto& w_out = params.at("out.w").value;
            for (int i = 0; i < kHiddenDim; ++i) {
                dw_out[i] = upstream * c.ln2.output[i];
                dln2_out[i] = upstream * w_out[i];
            }
            std::vector<double> dresid2 = layer_norm_backward(
                c.ln2, params.at("ln2.g").value, dln2_out, g.at("ln2.g"),
                g.at("ln2.b"));

            std::vector<double> dln1_out = dresid2;  // residual branch
            const std::vector<double>& dff_out = dresid2;
            accumulate_affine(g.at("ff.w2"), g.at("ff.b2"), dff_out,
                              std::span<const double>(c.ff_hidden));
            std::vector<double> dff_hidden = matvec_transposed(
                params.at("ff.w2").value, kHiddenDim, kFeedForwardDim, dff_out);
            std::vector<double> dff_pre(kFeedForwardDim);
            for (int i = 0; i < kFeedForwardDim; ++i) {
                dff_pre[i] = c.ff_pre[i] > 0.0 ? dff_hidden[i] : 0.0;
            }
            accumulate_affine(g.at("ff.w1"), g.at("ff.b1"), dff_pre,
                              std::span<const double>(c.ln1.output));
            const std::vector<double> dln1_from_ff = matvec_transposed(
                params.at("ff.w1").value, kFeedForwardDim, kHiddenDim, dff_pre);
            add_inplace(dln1_out, dln1_from_ff);

            std::vector<double> dresid1 = layer_norm_backward(
                c.ln1, params.at("ln1.g").value, dln1_out, g.at("ln1.g"),
                g.at("ln1.b"));

            std::vector<double> dembed = dresid1;  // residual branch
            const std::vector<double>& dattn_proj = dresid1;
            // context == attention weights (exactly 1) times V.
            std::vector<double> context(kHiddenDim);
            for (int h = 0; h < kHeads; ++h) {
                for (int d = 0; d < kHeadDim; ++d) {
                    context[h * kHeadDim + d] =
                        c.attn_weights[h] * c.v[h * kHeadDim + d];
                }
            }
            accumulate_affine(g.at("attn.wo"), g.at("attn.bo"), dattn_proj,
                              std::span<const double>(context));
            std::vector<double> dcontext =
                matvec_transposed(params.at("attn.wo").value, kHiddenDim,
                                  kHiddenDim, dattn_proj);
            // The singleton softmax is constant, so no gradient reaches the
            // attention logits, hence none reaches Q or K.
            std::vector<double> dv(kHiddenDim);
            for (int h = 0; h < kHeads; ++h) {
                for (int d = 0; d < kHeadDim; ++d) {
                    dv[h * kHeadDim + d] =
                        dcontext[h * kHeadDim + d] * c.attn_weights[h];
                }
            }
            accumulate_affine(g.at("attn.wv"), g.at("attn.bv"), dv,
                              std::span<const double>(c.embed));
            const std::vector<double> dembed_from_v = matvec_transposed(
                params.at("attn.wv").value, kHiddenDim, kHiddenDim, dv);
            add_inplace(dembed, dembed_from_v);

            accumulate_affine(g.at("embed.w"), g.at("embed.b"), dembed,
                              std::span<const double>(c.x));
            return g;
        }
    }
    throw std::logic_error("unknown scorer kind");
}

}  // namespace sdqn::nn
