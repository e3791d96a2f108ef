#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "specgap/jacobi.hpp"
#include "specgap/sturm.hpp"

namespace specgap {

inline constexpr std::size_t kDenseOracleCap = 64;

namespace detail {

// Cyclic Jacobi rotations on a dense symmetric matrix (row-major, n*n).
// On return a holds the diagonalized matrix and v the eigenvector columns.
// Deliberately unrelated to the Sturm/inverse-iteration path so the two can
// cross-check each other.
inline void symmetric_jacobi_eigen(std::vector<double>& a, std::vector<double>& v, std::size_t n) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    if (n == 1) return;

    const double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off2 = 0.0, frob2 = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                frob2 += a[p * n + q] * a[p * n + q];
                if (p < q) off2 += a[p * n + q] * a[p * n + q];
            }
        if (std::sqrt(2.0 * off2) <= eps * std::sqrt(frob2)) return;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double t1 = a[k * n + p], t2 = a[k * n + q];
                    a[k * n + p] = c * t1 - s * t2;
                    a[k * n + q] = s * t1 + c * t2;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double t1 = a[p * n + k], t2 = a[q * n + k];
                    a[p * n + k] = c * t1 - s * t2;
                    a[q * n + k] = s * t1 + c * t2;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double t1 = v[k * n + p], t2 = v[k * n + q];
                    v[k * n + p] = c * t1 - s * t2;
                    v[k * n + q] = s * t1 + c * t2;
                }
            }
        }
    }
    throw SolverError("symmetric_jacobi_eigen: rotations did not converge", -1.0);
}

} // namespace detail

// Full spectrum by rotation, capped at dimension 64. Serves as the
// independent oracle for the bisection/inverse-iteration solver.
inline SpectrumSlice dense_oracle_spectrum(const JacobiMatrix& J) {
    const std::size_t n = J.dim();
    if (n > kDenseOracleCap)
        throw std::invalid_argument("dense_oracle_spectrum: dimension exceeds oracle cap of 64");

    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = J.diag(i);
        if (i + 1 < n) {
            a[i * n + (i + 1)] = -J.offdiag(i);
            a[(i + 1) * n + i] = -J.offdiag(i);
        }
    }
    std::vector<double> v;
    detail::symmetric_jacobi_eigen(a, v, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });

    SpectrumSlice slice;
    slice.matrix_dim = n;
    slice.pairs.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        EigenPair& p = slice.pairs[r];
        p.value = a[order[r] * n + order[r]];
        p.vector.resize(n);
        for (std::size_t i = 0; i < n; ++i) p.vector[i] = v[i * n + order[r]];
        detail::normalize_sign(p.vector);
        p.residual = J.residual_inf(p.vector, p.value);
        p.index = r;
    }
    return slice;
}

} // namespace specgap
