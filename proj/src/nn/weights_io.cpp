#include <sdqn/nn/weights_io.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdqn::nn {

void save_params(const ParamStore& params, ScorerKind kind,
                 const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write weights file: " + path.string());
    }
    out << kWeightsFormatVersion << ' ' << scorer_kind_name(kind) << ' '
        << params.names().size() << '\n';
    char buffer[64];
    for (const auto& name : params.names()) {
        const Param& p = params.at(name);
        out << name << ' ' << p.shape.size();
        for (std::size_t d : p.shape) {
            out << ' ' << d;
        }
        out << '\n';
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", p.value[i]);
            if (i > 0) {
                out << ' ';
            }
            out << buffer;
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("short write to weights file: " + path.string());
    }
}

std::pair<ParamStore, ScorerKind> load_params(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open weights file: " + path.string());
    }
    std::string magic;
    std::string kind_name;
    std::size_t array_count = 0;
    if (!(in >> magic >> kind_name >> array_count) ||
        magic != kWeightsFormatVersion) {
        throw std::runtime_error("bad weights header in " + path.string());
    }
    const ScorerKind kind = parse_scorer_kind(kind_name);
    // Load into a fresh architecture-shaped store so shapes are validated
    // against the declared kind.
    ParamStore reference = init_params(kind, 0);
    if (array_count != reference.names().size()) {
        throw std::runtime_error("weights file array count mismatch");
    }
    for (std::size_t a = 0; a < array_count; ++a) {
        std::string name;
        std::size_t ndim = 0;
        if (!(in >> name >> ndim)) {
            throw std::runtime_error("truncated weights file");
        }
        if (!reference.has(name)) {
            throw std::runtime_error("unexpected array in weights file: " + name);
        }
        Param& p = reference.at(name);
        if (ndim != p.shape.size()) {
            throw std::runtime_error("array rank mismatch for " + name);
        }
        std::size_t count = 1;
        for (std::size_t d = 0; d < ndim; ++d) {
            std::size_t dim = 0;
            if (!(in >> dim)) {
                throw std::runtime_error("truncated weights file");
            }
            if (dim != p.shape[d]) {
                throw std::runtime_error("array shape mismatch for " + name);
            }
            count *= dim;
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (!(in >> p.value[i])) {
                throw std::runtime_error("truncated values for " + name);
            }
        }
        p.m.assign(count, 0.0);
        p.v.assign(count, 0.0);
    }
    reference.set_step(0);
    return {std::move(reference), kind};
}

}  // namespace sdqn::nn
