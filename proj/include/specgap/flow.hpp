#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "specgap/analysis.hpp"
#include "specgap/jacobi.hpp"
#include "specgap/operators.hpp"
#include "specgap/potentials.hpp"
#include "specgap/sturm.hpp"

namespace specgap {

enum class FlowTermination { converged_to_linear, max_steps, step_failure };

struct FlowState {
    double alpha = 0.0;
    std::vector<double> potential;
    double gap = 0.0;
    std::size_t m = 0;                 // sign regions detected at this state
    std::size_t n = 0;
    double linearity_residual = 0.0;   // max deviation from the least-squares line
    bool degenerate_regions = false;   // no strictly negative block; secant falls
                                       // back to the least-squares line
};

struct FlowTrace {
    std::vector<FlowState> states;
    FlowTermination terminated_reason = FlowTermination::max_steps;
};

using OperatorBuilder = std::function<JacobiMatrix(const std::vector<double>&)>;

namespace detail {

// Least-squares line through (index, value); returns max deviation and fills
// the sampled line if asked.
inline double linear_fit_residual(const std::vector<double>& w, std::vector<double>* line_out) {
    const std::size_t n = w.size();
    const double xb = 0.5 * static_cast<double>(n - 1);
    double sxx = 0.0, sxy = 0.0, yb = 0.0;
    for (double y : w) yb += y;
    yb /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xb;
        sxx += dx * dx;
        sxy += dx * (w[i] - yb);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double worst = 0.0;
    if (line_out) line_out->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = yb + slope * (static_cast<double>(i) - xb);
        if (line_out) (*line_out)[i] = fit;
        worst = std::max(worst, std::fabs(w[i] - fit));
    }
    return worst;
}

} // namespace detail

// Line through (m, w_m) and (n, w_n) in 1-based vertex coordinates, sampled on
// every vertex. For convex input it lies above w on [m+1, n] and below it
// elsewhere; that sandwich is validated with 1e-12 slack.
inline std::vector<double> secant_line_values(const std::vector<double>& w, std::size_t m,
                                              std::size_t n) {
    const std::size_t count = w.size();
    if (!(m >= 1 && m < n && n <= count))
        throw std::invalid_argument("secant_line_values: need 1 <= m < n <= size");
    const std::size_t mi = m - 1, ni = n - 1;
    const double slope = (w[ni] - w[mi]) / static_cast<double>(ni - mi);
    std::vector<double> l(count);
    for (std::size_t j = 0; j < count; ++j)
        l[j] = w[mi] + slope * (static_cast<double>(j) - static_cast<double>(mi));
    double amax = 1.0;
    for (double x : w) amax = std::max(amax, std::fabs(x));
    const double slack = 1e-12 * amax;
    for (std::size_t j = 0; j < count; ++j) {
        const bool inside = j > mi && j <= ni;
        if (inside ? l[j] < w[j] - slack : l[j] > w[j] + slack)
            throw std::runtime_error("secant_line_values: secant does not sandwich the potential");
    }
    return l;
}

inline PathPotential secant_potential(const PathPotential& w, std::size_t m, std::size_t n) {
    return PathPotential(secant_line_values(w.values, m, n));
}

// Diagnose one potential: gap, sign regions of the two lowest states, and
// distance from linearity.
inline FlowState flow_eval(const OperatorBuilder& build, std::vector<double> w, double alpha,
                           double tol) {
    const JacobiMatrix J = build(w);
    const SpectrumSlice s = lowest_eigenpairs(J, 2, tol);
    FlowState st;
    st.alpha = alpha;
    st.gap = s.pairs[1].value - s.pairs[0].value;
    st.linearity_residual = detail::linear_fit_residual(w, nullptr);
    const auto& u1 = s.pairs[0].vector;
    const auto& u2 = s.pairs[1].vector;
    const SignRegions r = find_sign_regions(u2, u1);
    st.m = r.m;
    st.n = r.n;
    // a tie-rule split with no strictly negative entry marks the regions degenerate
    const double amax1 = detail::max_abs(u1), amax2 = detail::max_abs(u2);
    const double tie = 1e-11 * std::max(amax1, amax2) * std::max(amax1, amax2);
    st.degenerate_regions = true;
    for (std::size_t i = 0; i < u1.size(); ++i)
        if (u2[i] * u2[i] - u1[i] * u1[i] < -tie) {
            st.degenerate_regions = false;
            break;
        }
    st.potential = std::move(w);
    return st;
}

// One explicit Euler step toward the state's secant line,
// w <- (1 - dalpha) w + dalpha l. Convexity is preserved exactly for
// dalpha <= 1 and is re-verified after the step.
inline FlowState flow_step(const OperatorBuilder& build, const FlowState& state, double dalpha,
                           double tol) {
    if (!(dalpha > 0.0 && dalpha <= 1.0))
        throw std::invalid_argument("flow_step: dalpha must be in (0, 1]");
    const std::vector<double>& w = state.potential;
    std::vector<double> l;
    if (state.degenerate_regions)
        detail::linear_fit_residual(w, &l);
    else
        l = secant_line_values(w, state.m, state.n);
    std::vector<double> next(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) next[j] = w[j] + dalpha * (l[j] - w[j]);

    double amax = 1.0;
    for (double x : next) amax = std::max(amax, std::fabs(x));
    for (std::size_t j = 1; j + 1 < next.size(); ++j)
        if (next[j + 1] - 2.0 * next[j] + next[j - 1] < -1e-10 * amax)
            throw std::runtime_error("flow_step: step destroyed convexity");
    return flow_eval(build, std::move(next), state.alpha + dalpha, tol);
}

// Drive the potential to a linear one. Sign regions are re-detected at every
// step. Solver or structure failures stop the trace rather than propagate.
inline FlowTrace flow_to_linear(const OperatorBuilder& build, std::vector<double> w0,
                                double dalpha, std::size_t max_steps, double lin_tol,
                                double tol) {
    if (!(lin_tol > 0.0))
        throw std::invalid_argument("flow_to_linear: lin_tol must be positive");
    FlowTrace trace;
    trace.states.push_back(flow_eval(build, std::move(w0), 0.0, tol));
    for (std::size_t k = 0; k < max_steps; ++k) {
        if (trace.states.back().linearity_residual <= lin_tol) {
            trace.terminated_reason = FlowTermination::converged_to_linear;
            return trace;
        }
        try {
            trace.states.push_back(flow_step(build, trace.states.back(), dalpha, tol));
        } catch (const std::exception&) {
            trace.terminated_reason = FlowTermination::step_failure;
            return trace;
        }
    }
    trace.terminated_reason = trace.states.back().linearity_residual <= lin_tol
                                  ? FlowTermination::converged_to_linear
                                  : FlowTermination::max_steps;
    return trace;
}

inline OperatorBuilder path_builder() {
    return [](const std::vector<double>& w) { return build_path(PathPotential(w)); };
}

inline OperatorBuilder hypercube_builder() {
    return [](const std::vector<double>& w) {
        return build_hypercube_reduced(HammingPotential(w), true);
    };
}

inline FlowTrace flow_to_linear_path(const PathPotential& w0, double dalpha,
                                     std::size_t max_steps, double lin_tol, double tol) {
    return flow_to_linear(path_builder(), w0.values, dalpha, max_steps, lin_tol, tol);
}

inline FlowTrace flow_to_linear_hamming(const HammingPotential& w0, double dalpha,
                                        std::size_t max_steps, double lin_tol, double tol) {
    return flow_to_linear(hypercube_builder(), w0.values, dalpha, max_steps, lin_tol, tol);
}

} // namespace specgap
