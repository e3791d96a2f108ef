#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "specgap/jacobi.hpp"
#include "specgap/prng.hpp"

namespace specgap {

// Number of eigenvalues of J strictly below x, by the Sturm pivot recursion
// p_i = (d_i - x) - e_{i-1}^2 / p_{i-1}. Zero pivots are flushed to
// +eps*scale, which keeps the count consistent with strict inequality when x
// lands exactly on an eigenvalue of a leading submatrix.
inline int sturm_count(const JacobiMatrix& J, double x) {
    const std::size_t n = J.dim();
    double scale = J.inf_norm();
    if (scale == 0.0) scale = 1.0;
    const double flush = std::numeric_limits<double>::epsilon() * scale;

    double p = J.diag(0) - x;
    if (p == 0.0) p = flush;
    int count = p < 0.0 ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double e = J.offdiag(i - 1);
        p = (J.diag(i) - x) - e * e / p;
        if (p == 0.0) p = flush;
        if (p < 0.0) ++count;
    }
    return count;
}

namespace detail {

struct Bracket {
    double lo;
    double hi;
};

inline Bracket gershgorin_bracket(const JacobiMatrix& J) {
    const std::size_t n = J.dim();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += J.offdiag(i - 1);
        if (i + 1 < n) r += J.offdiag(i);
        lo = std::min(lo, J.diag(i) - r);
        hi = std::max(hi, J.diag(i) + r);
    }
    const double pad = 16.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
    return {lo - pad, hi + pad};
}

// Bisect the j-th (0-based, ascending) eigenvalue down to the given interval
// width. The count invariant count(lo) <= j < count(hi) holds throughout.
inline Bracket bisect_eigenvalue(const JacobiMatrix& J, std::size_t j, double width) {
    Bracket b = gershgorin_bracket(J);
    for (int iter = 0; iter < 200 && (b.hi - b.lo) > width; ++iter) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;
        if (sturm_count(J, mid) >= static_cast<int>(j) + 1)
            b.hi = mid;
        else
            b.lo = mid;
    }
    return b;
}

// Solve (T - sigma I) y = rhs for the tridiagonal T given by (diag, offdiag),
// Gaussian elimination with partial pivoting. Near-zero pivots are flushed so
// the solve survives shifts that are numerically eigenvalues; the resulting
// growth is what inverse iteration feeds on.
inline void shifted_tridiag_solve(const std::vector<double>& diag,
                                  const std::vector<double>& offdiag,
                                  double sigma, double pivot_floor,
                                  std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 1) {
        double p = diag[0] - sigma;
        if (std::fabs(p) < pivot_floor) p = p < 0.0 ? -pivot_floor : pivot_floor;
        rhs[0] /= p;
        return;
    }
    std::vector<double> p(n), q(n, 0.0), r(n, 0.0);
    p[0] = diag[0] - sigma;
    q[0] = -offdiag[0];
    double sub_next = -offdiag[0];          // subdiagonal entry of the next row
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double bn = diag[i + 1] - sigma;
        double cn = i + 2 < n ? -offdiag[i + 1] : 0.0;
        double an = sub_next;
        if (std::fabs(p[i]) < std::fabs(an)) {
            std::swap(p[i], an);
            const double tq = q[i]; q[i] = bn; bn = tq;
            const double tr = r[i]; r[i] = cn; cn = tr;
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (std::fabs(p[i]) < pivot_floor) p[i] = p[i] < 0.0 ? -pivot_floor : pivot_floor;
        const double m = an / p[i];
        p[i + 1] = bn - m * q[i];
        q[i + 1] = cn - m * r[i];
        rhs[i + 1] -= m * rhs[i];
        if (i + 2 < n) sub_next = -offdiag[i + 1];
    }
    if (std::fabs(p[n - 1]) < pivot_floor)
        p[n - 1] = p[n - 1] < 0.0 ? -pivot_floor : pivot_floor;
    rhs[n - 1] /= p[n - 1];
    rhs[n - 2] = (rhs[n - 2] - q[n - 2] * rhs[n - 1]) / p[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
        rhs[i] = (rhs[i] - q[i] * rhs[i + 1] - r[i] * rhs[i + 2]) / p[i];
}

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// First component above the noise floor is made positive. Keying the global
// sign off a sub-floor component would let solver dust flip the vector.
inline void normalize_sign(std::vector<double>& v) {
    double amax = 0.0;
    for (double x : v) amax = std::max(amax, std::fabs(x));
    const double floor = 1e-11 * amax;
    for (double x : v) {
        if (std::fabs(x) > floor) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

} // namespace detail

// The k lowest eigenvalues, ascending, each within +-tol. Bracketing starts
// from the Gershgorin bounds; at most 200 bisection steps per eigenvalue.
inline std::vector<double> eigenvalues_lowest(const JacobiMatrix& J, std::size_t k, double tol) {
    const std::size_t n = J.dim();
    if (k < 1 || k > n)
        throw std::invalid_argument("eigenvalues_lowest: k out of range");
    if (!(tol > 0.0))
        throw std::invalid_argument("eigenvalues_lowest: tol must be positive");
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, J.inf_norm());
    const double width = std::max(tol, floor);
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        const detail::Bracket b = detail::bisect_eigenvalue(J, j, width);
        out[j] = 0.5 * (b.lo + b.hi);
    }
    return out;
}

// The k lowest eigenpairs. Values are bisected to near machine width and
// refined by the Rayleigh quotient of the inverse-iterated vector; tol sets
// the residual target tol * (max|diag| + 2 max offdiag). Vectors of clustered
// eigenvalues are re-orthogonalized against the earlier members of the
// cluster. Sign convention: first above-floor component positive.
inline SpectrumSlice lowest_eigenpairs(const JacobiMatrix& J, std::size_t k, double tol) {
    const std::size_t n = J.dim();
    if (k < 1 || k > n)
        throw std::invalid_argument("lowest_eigenpairs: k out of range");
    if (!(tol > 0.0))
        throw std::invalid_argument("lowest_eigenpairs: tol must be positive");

    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(1.0, J.inf_norm());
    double sens = 0.0;
    for (double d : J.diag_values()) sens = std::max(sens, std::fabs(d));
    double emax = 0.0;
    for (double e : J.offdiag_values()) emax = std::max(emax, e);
    sens += 2.0 * emax;                     // max|diag| + 2 max offdiag
    if (sens == 0.0) sens = 1.0;
    const double target = tol * sens;
    const double pivot_floor = eps * scale;
    const double cluster_width = 1e-4 * scale;

    SpectrumSlice slice;
    slice.matrix_dim = n;
    slice.pairs.reserve(k);

    if (n == 1) {
        slice.pairs.push_back({J.diag(0), {1.0}, 0.0, 0});
        return slice;
    }

    SplitMix64 restart_rng(0x5eedbabe00c0ffeeULL);
    std::vector<double> values;
    for (std::size_t j = 0; j < k; ++j) {
        const detail::Bracket b = detail::bisect_eigenvalue(J, j, 8.0 * eps * scale);
        const double lambda_hat = 0.5 * (b.lo + b.hi);
        const double half_width = 0.5 * (b.hi - b.lo);

        // members of the cluster this eigenvalue belongs to
        std::vector<const std::vector<double>*> cluster;
        for (std::size_t t = 0; t < slice.pairs.size(); ++t)
            if (std::fabs(slice.pairs[t].value - lambda_hat) < cluster_width)
                cluster.push_back(&slice.pairs[t].vector);

        static constexpr double kShiftSteps[] = {1.0, -1.0, 8.0, -8.0, 64.0};
        EigenPair best;
        best.residual = std::numeric_limits<double>::infinity();
        bool converged = false;

        for (int attempt = 0; attempt < 5 && !converged; ++attempt) {
            const double sigma = lambda_hat + kShiftSteps[attempt] * eps * scale;
            std::vector<double> x(n);
            if (attempt == 0) {
                std::fill(x.begin(), x.end(), 1.0 / std::sqrt(static_cast<double>(n)));
            } else {
                for (double& xi : x) xi = restart_rng.uniform(-1.0, 1.0);
            }
            for (int it = 0; it < 5; ++it) {
                detail::shifted_tridiag_solve(J.diag_values(), J.offdiag_values(), sigma,
                                              pivot_floor, x);
                for (const auto* prev : cluster) {
                    const double c = detail::dot(x, *prev);
                    for (std::size_t i = 0; i < n; ++i) x[i] -= c * (*prev)[i];
                }
                const double nrm = detail::norm2(x);
                if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
                for (double& xi : x) xi /= nrm;
                std::vector<double> Jx(n);
                J.apply(x, Jx);
                const double rho = detail::dot(x, Jx);
                double res = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    res = std::max(res, std::fabs(Jx[i] - rho * x[i]));
                if (res < best.residual) {
                    best.value = rho;
                    best.vector = x;
                    best.residual = res;
                }
                if (res <= target) {
                    converged = true;
                    break;
                }
            }
        }
        if (!converged)
            throw SolverError("lowest_eigenpairs: inverse iteration did not reach its residual target",
                              best.residual);

        // keep the robust bisection value if the Rayleigh quotient strayed
        if (std::fabs(best.value - lambda_hat) > half_width + 64.0 * eps * scale)
            best.value = lambda_hat;
        detail::normalize_sign(best.vector);
        best.index = j;
        slice.pairs.push_back(std::move(best));
    }
    return slice;
}

inline EigenPair eigenpair(const JacobiMatrix& J, std::size_t index, double tol) {
    SpectrumSlice s = lowest_eigenpairs(J, index + 1, tol);
    return std::move(s.pairs[index]);
}

} // namespace specgap
