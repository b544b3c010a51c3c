#include <sdqn/nn/param_store.hpp>

#include <numeric>
#include <stdexcept>

namespace sdqn::nn {

void ParamStore::add(const std::string& name, std::vector<std::size_t> shape,
                     std::vector<double> values, double init_bound) {
    std::size_t expected = 1;
    for (std::size_t d : shape) {
        expected *= d;
    }
    if (expected != values.size()) {
        throw std::invalid_argument("param " + name + ": shape/value mismatch");
    }
    if (params_.count(name) != 0) {
        throw std::invalid_argument("param " + name + ": duplicate name");
    }
    Param p;
    p.shape = std::move(shape);
    p.value = std::move(values);
    p.m.assign(p.value.size(), 0.0);
    p.v.assign(p.value.size(), 0.0);
    p.init_bound = init_bound;
    order_.push_back(name);
    params_.emplace(name, std::move(p));
}

Param& ParamStore::at(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) {
        throw std::out_of_range("no such param: " + name);
    }
    return it->second;
}

const Param& ParamStore::at(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) {
        throw std::out_of_range("no such param: " + name);
    }
    return it->second;
}

bool ParamStore::has(const std::string& name) const {
    return params_.count(name) != 0;
}

std::size_t ParamStore::total_parameters() const {
    std::size_t total = 0;
    for (const auto& [name, p] : params_) {
        total += p.size();
    }
    return total;
}

GradStore ParamStore::make_grads() const {
    GradStore g;
    for (const auto& name : order_) {
        g.grads.emplace(name, std::vector<double>(at(name).size(), 0.0));
    }
    return g;
}

}  // namespace sdqn::nn
