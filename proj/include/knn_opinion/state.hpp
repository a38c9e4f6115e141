// state.hpp - model parameters, opinion vectors and the error types shared by
// every module.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace knn_opinion {

using Index = std::size_t;

class InvalidState : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Agent count `n` and neighbor count `k`, with 1 <= k < n.
struct ModelParams {
    std::size_t n = 0;
    std::size_t k = 0;

    void validate() const {
        if (k < 1 || k >= n)
            throw InvalidState("model parameters require 1 <= k < n (got n=" + std::to_string(n) +
                               ", k=" + std::to_string(k) + ")");
    }
    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline void require_finite(std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw InvalidState("opinion of agent " + std::to_string(i + 1) + " is not finite");
}

/// A validated vector of n opinions together with the neighbor count k.
/// Agents are 0-based internally; every external format adds one.
class OpinionState {
public:
    OpinionState() = default;

    OpinionState(std::vector<double> opinions, std::size_t k)
        : x_(std::move(opinions)), params_{x_.size(), k} {
        params_.validate();
        require_finite(x_);
    }

    std::size_t n() const { return params_.n; }
    std::size_t k() const { return params_.k; }
    const ModelParams& params() const { return params_; }

    std::span<const double> opinions() const { return x_; }
    const std::vector<double>& values() const { return x_; }
    double operator[](Index i) const { return x_[i]; }

    friend bool operator==(const OpinionState&, const OpinionState&) = default;

private:
    std::vector<double> x_;
    ModelParams params_;
};

/// Opinion rates F(x), one entry per agent.
using Velocity = std::vector<double>;

inline double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

}  // namespace knn_opinion
