#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sdqn::nn {

/// A named dense array of doubles with its Adam moment accumulators.
struct Param {
    std::vector<std::size_t> shape;
    std::vector<double> value;
    std::vector<double> m;  // first moment
    std::vector<double> v;  // second moment
    double init_bound = 0.0;  // half-width of the uniform init, 0 = constant

    std::size_t size() const { return value.size(); }
};

/// Gradients shaped like a ParamStore's parameters.
struct GradStore {
    std::map<std::string, std::vector<double>> grads;

    std::vector<double>& at(const std::string& name) { return grads.at(name); }
    const std::vector<double>& at(const std::string& name) const {
        return grads.at(name);
    }
};

class ParamStore {
  public:
    void add(const std::string& name, std::vector<std::size_t> shape,
             std::vector<double> values, double init_bound = 0.0);

    Param& at(const std::string& name);
    const Param& at(const std::string& name) const;
    bool has(const std::string& name) const;

    const std::vector<std::string>& names() const { return order_; }
    std::size_t total_parameters() const;

    std::int64_t step() const { return step_; }
    void set_step(std::int64_t step) { step_ = step; }

    /// Zero-filled gradients matching every parameter.
    GradStore make_grads() const;

  private:
    std::vector<std::string> order_;
    std::map<std::string, Param> params_;
    std::int64_t step_ = 0;
};

}  // namespace sdqn::nn
