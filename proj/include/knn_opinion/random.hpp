// random.hpp - reproducible uniform variates.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Doubles are built from the top 53 bits of each draw,
// u = (draw >> 11) * 2^-53, instead of std::uniform_real_distribution, whose
// algorithm is implementation-defined. The same seed therefore yields the
// same numbers on every conforming platform.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace knn_opinion {

class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double unit() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::uint64_t below(std::uint64_t bound) { return static_cast<std::uint64_t>(unit() * static_cast<double>(bound)); }

private:
    std::mt19937_64 engine_;
};

/// n opinions drawn uniformly from [0, 1).
inline std::vector<double> random_opinions(std::size_t n, std::uint64_t seed) {
    UniformSource src(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = src.unit();
    return x;
}

}  // namespace knn_opinion
