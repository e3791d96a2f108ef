#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "specgap/prng.hpp"

namespace specgap {

// Second differences nonnegative within rounding slack scaled to the values.
inline bool certify_convex(const std::vector<double>& w) {
    double amax = 1.0;
    for (double x : w) amax = std::max(amax, std::fabs(x));
    const double slack = 1e-12 * amax;
    for (std::size_t i = 1; i + 1 < w.size(); ++i)
        if (w[i + 1] - 2.0 * w[i] + w[i - 1] < -slack) return false;
    return true;
}

// Vertex potential on the path P_N; values[i] belongs to vertex i+1.
struct PathPotential {
    std::vector<double> values;
    bool convexity_certified;

    explicit PathPotential(std::vector<double> v)
        : values(std::move(v)), convexity_certified(certify_convex(values)) {
        if (values.empty())
            throw std::invalid_argument("PathPotential: empty value list");
    }

    std::size_t path_length() const { return values.size(); }
};

// Potential on Hamming weights 0..N of the N-cube; values[m] belongs to weight m.
struct HammingPotential {
    std::vector<double> values;
    bool convexity_certified;

    explicit HammingPotential(std::vector<double> v)
        : values(std::move(v)), convexity_certified(certify_convex(values)) {
        if (values.size() < 2)
            throw std::invalid_argument("HammingPotential: need at least weights 0 and 1");
    }

    int cube_dim() const { return static_cast<int>(values.size()) - 1; }
};

// The one-parameter family W_i = slope * (i - 1) on path vertices.
struct UnitLinear {
    double slope;

    explicit UnitLinear(double s) : slope(s) {
        if (!(s >= 0.0))
            throw std::invalid_argument("UnitLinear: slope must be >= 0");
    }

    PathPotential path_values(std::size_t N) const {
        std::vector<double> w(N);
        for (std::size_t i = 0; i < N; ++i) w[i] = slope * static_cast<double>(i);
        return PathPotential(std::move(w));
    }
};

inline PathPotential flat_path(std::size_t N) {
    return PathPotential(std::vector<double>(N, 0.0));
}

inline PathPotential unit_linear_path(std::size_t N, double alpha) {
    return UnitLinear(alpha).path_values(N);
}

inline PathPotential quadratic_path(std::size_t N, double scale) {
    std::vector<double> w(N);
    const double c = 0.5 * static_cast<double>(N + 1);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = static_cast<double>(i + 1) - c;
        w[i] = scale * x * x;
    }
    return PathPotential(std::move(w));
}

inline HammingPotential flat_hamming(int N) {
    return HammingPotential(std::vector<double>(static_cast<std::size_t>(N) + 1, 0.0));
}

// W_m = alpha * (m - N/2), the family with the closed-form reduced spectrum.
inline HammingPotential linear_hamming(int N, double alpha) {
    std::vector<double> w(static_cast<std::size_t>(N) + 1);
    for (int m = 0; m <= N; ++m)
        w[static_cast<std::size_t>(m)] = alpha * (static_cast<double>(m) - 0.5 * N);
    return HammingPotential(std::move(w));
}

inline HammingPotential quadratic_hamming(int N, double scale) {
    std::vector<double> w(static_cast<std::size_t>(N) + 1);
    for (int m = 0; m <= N; ++m) {
        const double x = static_cast<double>(m) - 0.5 * N;
        w[static_cast<std::size_t>(m)] = scale * x * x;
    }
    return HammingPotential(std::move(w));
}

// Convex by construction: draw W_1 and the initial slope from [-scale, scale],
// the second differences from [0, scale], and integrate twice. Draw order is
// fixed (W_1, slope, then curvatures left to right) so seeds reproduce.
inline std::vector<double> random_convex_values(std::size_t count, std::uint64_t seed, double scale) {
    if (count < 1)
        throw std::invalid_argument("random_convex_values: count must be >= 1");
    if (!(scale >= 0.0))
        throw std::invalid_argument("random_convex_values: scale must be >= 0");
    SplitMix64 rng(seed);
    std::vector<double> w(count);
    w[0] = rng.uniform(-scale, scale);
    if (count == 1) return w;
    w[1] = w[0] + rng.uniform(-scale, scale);
    for (std::size_t i = 2; i < count; ++i)
        w[i] = 2.0 * w[i - 1] - w[i - 2] + rng.uniform(0.0, scale);
    return w;
}

inline PathPotential random_convex_path(std::size_t N, std::uint64_t seed, double scale) {
    return PathPotential(random_convex_values(N, seed, scale));
}

inline HammingPotential random_convex_hamming(int N, std::uint64_t seed, double scale) {
    return HammingPotential(random_convex_values(static_cast<std::size_t>(N) + 1, seed, scale));
}

} // namespace specgap
