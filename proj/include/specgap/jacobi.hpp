#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specgap {

// Thrown when an iterative stage fails to reach its target accuracy.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}

    double best_residual() const { return best_residual_; }

private:
    double best_residual_;
};

// Symmetric tridiagonal matrix with strictly negative off-diagonal entries.
// offdiag stores the coupling magnitudes, so the (i, i+1) entry is -offdiag[i].
// Ground states of such matrices can be chosen strictly positive.
class JacobiMatrix {
public:
    JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag)
        : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
        if (diag_.empty())
            throw std::invalid_argument("JacobiMatrix: dimension must be >= 1");
        if (offdiag_.size() + 1 != diag_.size())
            throw std::invalid_argument("JacobiMatrix: offdiag size must be dim - 1");
        for (double e : offdiag_)
            if (!(e > 0.0))
                throw std::invalid_argument("JacobiMatrix: couplings must be strictly positive");
    }

    std::size_t dim() const { return diag_.size(); }
    double diag(std::size_t i) const { return diag_[i]; }
    double offdiag(std::size_t i) const { return offdiag_[i]; }
    const std::vector<double>& diag_values() const { return diag_; }
    const std::vector<double>& offdiag_values() const { return offdiag_; }

    // Max absolute row sum. Used as the scale for tolerances and pivot flushing.
    double inf_norm() const {
        const std::size_t n = dim();
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = std::fabs(diag_[i]);
            if (i > 0) row += offdiag_[i - 1];
            if (i + 1 < n) row += offdiag_[i];
            if (row > best) best = row;
        }
        return best;
    }

    // y = J x
    void apply(std::span<const double> x, std::span<double> y) const {
        const std::size_t n = dim();
        if (x.size() != n || y.size() != n)
            throw std::invalid_argument("JacobiMatrix::apply: size mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            double v = diag_[i] * x[i];
            if (i > 0) v -= offdiag_[i - 1] * x[i - 1];
            if (i + 1 < n) v -= offdiag_[i] * x[i + 1];
            y[i] = v;
        }
    }

    // max_i |(J v - lambda v)_i|
    double residual_inf(std::span<const double> v, double lambda) const {
        const std::size_t n = dim();
        if (v.size() != n)
            throw std::invalid_argument("JacobiMatrix::residual_inf: size mismatch");
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = (diag_[i] - lambda) * v[i];
            if (i > 0) r -= offdiag_[i - 1] * v[i - 1];
            if (i + 1 < n) r -= offdiag_[i] * v[i + 1];
            r = std::fabs(r);
            if (r > worst) worst = r;
        }
        return worst;
    }

    JacobiMatrix leading_principal_submatrix(std::size_t k) const {
        if (k < 1 || k > dim())
            throw std::invalid_argument("leading_principal_submatrix: order out of range");
        return JacobiMatrix(
            std::vector<double>(diag_.begin(), diag_.begin() + static_cast<long>(k)),
            std::vector<double>(offdiag_.begin(), offdiag_.begin() + static_cast<long>(k) - 1));
    }

private:
    std::vector<double> diag_;
    std::vector<double> offdiag_;
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;   // inf-norm of J v - value v
    std::size_t index = 0;   // position in the ascending spectrum
};

struct SpectrumSlice {
    std::vector<EigenPair> pairs;   // ascending by value
    std::size_t matrix_dim = 0;
};

} // namespace specgap
