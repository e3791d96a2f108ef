#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "specgap/jacobi.hpp"
#include "specgap/potentials.hpp"

namespace specgap {

// Path Schroedinger operator: graph Laplacian of P_N plus the vertex
// potential. Endpoint diagonal entries are 1 + W, which is the fictitious
// boundary convention u_0 = u_1, u_{N+1} = u_N.
inline JacobiMatrix build_path(const PathPotential& W) {
    const std::size_t N = W.path_length();
    if (N < 2)
        throw std::invalid_argument("build_path: path needs at least 2 vertices");
    std::vector<double> d(N);
    for (std::size_t i = 0; i < N; ++i) d[i] = 2.0 + W.values[i];
    d[0] -= 1.0;
    d[N - 1] -= 1.0;
    return JacobiMatrix(std::move(d), std::vector<double>(N - 1, 1.0));
}

// Weight-space reduction of the N-cube: couplings h(m) = sqrt((m+1)(N-m))
// between Hamming weights m and m+1. `shifted` drops the constant N from the
// diagonal, which moves the whole spectrum but no gap.
struct SymmetricReduction {
    int dim_N;
    std::vector<double> couplings;
    bool shifted;
};

inline SymmetricReduction symmetric_reduction(int N, bool shifted) {
    if (N < 1)
        throw std::invalid_argument("symmetric_reduction: cube dimension must be >= 1");
    SymmetricReduction r{N, std::vector<double>(static_cast<std::size_t>(N)), shifted};
    for (int m = 0; m < N; ++m)
        r.couplings[static_cast<std::size_t>(m)] =
            std::sqrt((m + 1.0) * static_cast<double>(N - m));
    return r;
}

inline JacobiMatrix build_hypercube_reduced(const HammingPotential& W, bool shifted) {
    const int N = W.cube_dim();
    SymmetricReduction red = symmetric_reduction(N, shifted);
    std::vector<double> d(static_cast<std::size_t>(N) + 1);
    const double base = shifted ? 0.0 : static_cast<double>(N);
    for (int m = 0; m <= N; ++m)
        d[static_cast<std::size_t>(m)] = base + W.values[static_cast<std::size_t>(m)];
    return JacobiMatrix(std::move(d), std::move(red.couplings));
}

// Full 2^N operator, matrix-free. (H x)_b = (N + W_|b|) x_b - sum of x over
// the N single-bit flips of b.
class HypercubeOperator {
public:
    explicit HypercubeOperator(const HammingPotential& W) : N_(W.cube_dim()) {
        if (N_ < 1 || N_ > 12)
            throw std::invalid_argument("HypercubeOperator: cube dimension must be in [1, 12]");
        diag_.resize(std::size_t{1} << N_);
        for (std::size_t b = 0; b < diag_.size(); ++b)
            diag_[b] = static_cast<double>(N_) + W.values[static_cast<std::size_t>(std::popcount(b))];
    }

    std::size_t dim() const { return diag_.size(); }
    int cube_dim() const { return N_; }
    double diag(std::size_t b) const { return diag_[b]; }

    void apply(std::span<const double> x, std::span<double> y) const {
        if (x.size() != dim() || y.size() != dim())
            throw std::invalid_argument("HypercubeOperator::apply: size mismatch");
        for (std::size_t b = 0; b < dim(); ++b) {
            double v = diag_[b] * x[b];
            for (int bit = 0; bit < N_; ++bit) v -= x[b ^ (std::size_t{1} << bit)];
            y[b] = v;
        }
    }

    // 2-norm of H v - lambda v
    double residual_two(std::span<const double> v, double lambda) const {
        std::vector<double> hv(dim());
        apply(v, hv);
        double s = 0.0;
        for (std::size_t b = 0; b < dim(); ++b) {
            const double r = hv[b] - lambda * v[b];
            s += r * r;
        }
        return std::sqrt(s);
    }

private:
    int N_;
    std::vector<double> diag_;
};

inline HypercubeOperator build_hypercube_full(const HammingPotential& W) {
    return HypercubeOperator(W);
}

// Ratio f(1)/f(0) of the reduction's balancing weights, as an exact product so
// it stays finite and accurate for every N:
//   N = 2k+1:  sqrt(N) * prod_{j=1..k} (2j-1)/(2j)
//   N = 2k:    2 / (sqrt(N) * pi * prod_{j=1..k} (2j-1)/(2j))
inline double vprime_f1_ratio(int N) {
    if (N < 1)
        throw std::invalid_argument("vprime_f1_ratio: cube dimension must be >= 1");
    const int k = N / 2;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r *= (2.0 * j - 1.0) / (2.0 * j);
    if (N % 2 == 1) return std::sqrt(static_cast<double>(N)) * r;
    return 2.0 / (std::sqrt(static_cast<double>(N)) * 3.14159265358979323846 * r);
}

// Balancing transform v'_m = f(m) v_m that turns the weight-space recurrence
// into unit-coupling form:
//   v'_{m-1} - 2 v'_m + v'_{m+1} = c_m (W_m - q_m - lambda) v'_m,
// with v'_{-1} = v'_{N+1} = 0 and lambda from the shifted reduced operator.
struct VPrimeTransform {
    int dim_N;
    std::vector<double> f;   // size N+1, f[0] = 1, all positive
    std::vector<double> c;   // size N+1, c[m] = f(m-1) / (h(m-1) f(m)), c[0] = f(1)/(h(0) f(0))
    std::vector<double> q;   // size N+1, q[m] = 2 / c[m]
};

inline VPrimeTransform vprime_transform(int N) {
    if (N < 1)
        throw std::invalid_argument("vprime_transform: cube dimension must be >= 1");
    const auto h = [N](int m) { return std::sqrt((m + 1.0) * static_cast<double>(N - m)); };
    VPrimeTransform T;
    T.dim_N = N;
    T.f.resize(static_cast<std::size_t>(N) + 1);
    T.c.resize(static_cast<std::size_t>(N) + 1);
    T.q.resize(static_cast<std::size_t>(N) + 1);
    T.f[0] = 1.0;
    T.f[1] = vprime_f1_ratio(N);
    for (int m = 2; m <= N; ++m)
        T.f[static_cast<std::size_t>(m)] =
            T.f[static_cast<std::size_t>(m - 2)] * h(m - 1) / h(m - 2);
    T.c[0] = T.f[1] / (h(0) * T.f[0]);
    for (int m = 1; m <= N; ++m)
        T.c[static_cast<std::size_t>(m)] =
            T.f[static_cast<std::size_t>(m - 1)] / (h(m - 1) * T.f[static_cast<std::size_t>(m)]);
    for (int m = 0; m <= N; ++m)
        T.q[static_cast<std::size_t>(m)] = 2.0 / T.c[static_cast<std::size_t>(m)];
    return T;
}

inline std::vector<double> apply_vprime(const VPrimeTransform& T, std::span<const double> v) {
    if (v.size() != T.f.size())
        throw std::invalid_argument("apply_vprime: size mismatch");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = T.f[i] * v[i];
    return out;
}

} // namespace specgap
