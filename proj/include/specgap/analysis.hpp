#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "specgap/jacobi.hpp"
#include "specgap/operators.hpp"
#include "specgap/potentials.hpp"
#include "specgap/sturm.hpp"

namespace specgap {

// Components below this fraction of the vector's max are treated as solver
// noise by the strict sign and monotonicity checks. Evanescent tails of
// confining potentials decay below attainable accuracy; testing their signs
// would test rounding, not structure.
inline constexpr double kTailFloor = 1e-11;

// 1-based split of 1..N: every strictly negative entry of u(l2)^2 - u(l1)^2
// lies in [m, n], and the anchors m < n are interior vertices. Away from the
// chain ends the negative block is exactly [m+1, n]; a block touching vertex
// 1 clamps m to 1.
struct SignRegions {
    std::size_t m = 0;
    std::size_t n = 0;
};

struct GapReport {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gap = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    double node_position = 0.0;   // first node of u(l2), 1-based coordinates
    SignRegions sign_regions;
    bool ground_state_monotone = false;
};

struct CasoratianSeq {
    std::vector<double> w;
    bool weighted = false;   // true for the transformed (weight-space) variant
    int first_index = 0;     // coordinate of w[0]: 0 on paths, -1 when weighted
};

struct ThetaSeq {
    std::vector<double> theta;   // theta[i] compares the operators at vertex i+1
};

struct NodeList {
    std::vector<double> positions;   // ascending, 1-based vertex coordinates
};

class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Entries of a positivity-convention vector may carry sub-floor dust of either
// sign; anything below -tol counts as a genuine violation.
inline bool effectively_positive(std::span<const double> u) {
    const double tol = 1e3 * std::numeric_limits<double>::epsilon() * max_abs(u);
    for (double x : u)
        if (x < -tol) return false;
    return true;
}

// Nonincreasing within slack, ignoring sub-floor tail dust.
inline bool nonincreasing(std::span<const double> u, double slack_rel) {
    const double amax = max_abs(u);
    const double slack = slack_rel * std::max(1.0, amax);
    const double floor = kTailFloor * amax;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        if (std::fabs(u[i]) <= floor && std::fabs(u[i + 1]) <= floor) continue;
        if (u[i + 1] > u[i] + slack) return false;
    }
    return true;
}

} // namespace detail

// Sign changes of the above-floor entries. An eigenvector of index k has
// exactly k of these.
inline std::size_t generalized_zero_count(std::span<const double> u) {
    const double floor = kTailFloor * detail::max_abs(u);
    int prev = 0;
    std::size_t count = 0;
    for (double x : u) {
        if (std::fabs(x) <= floor) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// Nodes of the piecewise-linear interpolant, 1-based: an exact zero at vertex
// i is the node x = i; a sign change between i and i+1 crosses at
// x = i + u_i / (u_i - u_{i+1}).
inline NodeList nodes(std::span<const double> u) {
    NodeList out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) {
            out.positions.push_back(static_cast<double>(i + 1));
        } else if (i + 1 < u.size() && u[i + 1] != 0.0 && u[i] * u[i + 1] < 0.0) {
            out.positions.push_back(static_cast<double>(i + 1) + u[i] / (u[i] - u[i + 1]));
        }
    }
    return out;
}

// Sum of w_i u_i^2.
inline double expectation(std::span<const double> w, std::span<const double> u) {
    if (w.size() != u.size())
        throw std::invalid_argument("expectation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i] * u[i];
    return s;
}

// Split 1..N by the sign of d_i = u2_i^2 - u1_i^2. Valid inputs produce the
// pattern nonneg / negative / nonneg; ties and sub-noise values go to the
// outer regions. The monotonicity of u2_i/u1_i that underlies the pattern is
// validated in division-free form (u2_{i+1} u1_i - u2_i u1_{i+1} <= slack),
// which is immune to evanescent-tail noise.
inline SignRegions find_sign_regions(std::span<const double> u2, std::span<const double> u1) {
    const std::size_t N = u1.size();
    if (u2.size() != N || N < 2)
        throw std::invalid_argument("find_sign_regions: need two vectors of equal size >= 2");
    const double amax1 = detail::max_abs(u1);
    const double amax2 = detail::max_abs(u2);
    if (amax1 == 0.0 || amax2 == 0.0)
        throw std::invalid_argument("find_sign_regions: zero vector");
    if (!detail::effectively_positive(u1))
        throw std::invalid_argument("find_sign_regions: ground state must be positive");

    const double ratio_slack = 1e-10 * amax1 * amax2;
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (u2[i + 1] * u1[i] - u2[i] * u1[i + 1] > ratio_slack)
            throw std::runtime_error("find_sign_regions: u2/u1 ratio is not nonincreasing");

    const double tie = 1e-11 * std::max(amax1, amax2) * std::max(amax1, amax2);
    std::size_t first_neg = 0, last_neg = 0;   // 1-based, 0 = none
    for (std::size_t i = 0; i < N; ++i) {
        const double d = u2[i] * u2[i] - u1[i] * u1[i];
        if (d < -tie) {
            if (first_neg == 0) first_neg = i + 1;
            last_neg = i + 1;
        }
    }
    if (first_neg == 0) {
        // no strictly negative block: center split, matching the tie rule
        SignRegions r;
        r.m = std::max<std::size_t>(1, std::min(N - 1, N / 2));
        r.n = r.m + 1;
        return r;
    }
    for (std::size_t i = first_neg; i + 2 <= last_neg; ++i) {
        const double d = u2[i] * u2[i] - u1[i] * u1[i];   // 1-based positions first_neg+1 .. last_neg-1
        if (d > tie)
            throw std::runtime_error("find_sign_regions: negative block is not contiguous");
    }
    // An empty outer region is legal (the ratio can start below 1 or end
    // above -1). Anchoring the secant at the chain end keeps the descent
    // inequality intact because the anchor zeroes its own line term.
    SignRegions r;
    r.m = first_neg > 1 ? first_neg - 1 : 1;
    r.n = std::max(last_neg, r.m + 1);
    return r;
}

// Casoratian w_i = u2_{i+1} u1_i - u2_i u1_{i+1} along the chain. The path
// variant (no weights) extends by the fictitious boundary u_0 = u_1,
// u_{N+1} = u_N, giving entries w_0..w_N with w_0 = w_N = 0. The weighted
// variant takes transformed vectors plus their coefficients and extends by
// zeros, giving entries w_{-1}..w_{N-1} with zero ends and one interior
// entry per edge. Both validate the telescoping identity
// delta w_{i-1} = -gap * (weight_i) * u2_i u1_i before returning.
inline CasoratianSeq casoratian(std::span<const double> u2, std::span<const double> u1,
                                double gap, std::span<const double> weights = {}) {
    const std::size_t N = u1.size();
    if (u2.size() != N || N < 1)
        throw std::invalid_argument("casoratian: need two vectors of equal size >= 1");
    if (!weights.empty() && weights.size() != N)
        throw std::invalid_argument("casoratian: weight count must match vector size");
    if (!detail::effectively_positive(u1))
        throw std::invalid_argument("casoratian: u(lambda1) violates the positivity convention");

    const double amax1 = std::max(detail::max_abs(u1), 1e-300);
    const double amax2 = std::max(detail::max_abs(u2), 1e-300);
    double wmax = 1.0;
    for (double c : weights) wmax = std::max(wmax, std::fabs(c));
    const double check_tol = 1e-8 * std::max(1.0, std::fabs(gap)) * wmax * amax1 * amax2;

    CasoratianSeq seq;
    seq.weighted = !weights.empty();
    seq.first_index = seq.weighted ? -1 : 0;

    // Path entries live at coordinates 1..N, weighted entries at 0..N-1.
    const long c0 = seq.weighted ? 0 : 1;
    const long last = c0 + static_cast<long>(N) - 1;
    const auto ext = [&](std::span<const double> u, long x) -> double {
        if (x < c0) return seq.weighted ? 0.0 : u[0];
        if (x > last) return seq.weighted ? 0.0 : u[N - 1];
        return u[static_cast<std::size_t>(x - c0)];
    };
    const long lo = seq.first_index;
    seq.w.resize(static_cast<std::size_t>(last + 1 - lo));
    for (long x = lo; x <= last; ++x)
        seq.w[static_cast<std::size_t>(x - lo)] =
            ext(u2, x + 1) * ext(u1, x) - ext(u2, x) * ext(u1, x + 1);

    for (long x = lo + 1; x <= last; ++x) {
        const double cw = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(x)];
        const double lhs = seq.w[static_cast<std::size_t>(x - lo)] -
                           seq.w[static_cast<std::size_t>(x - 1 - lo)];
        const double rhs = -gap * cw * ext(u2, x) * ext(u1, x);
        if (std::fabs(lhs - rhs) > check_tol)
            throw std::runtime_error("casoratian: telescoping identity violated");
    }
    return seq;
}

// d(gap)/d(parameter) for the family J + t * diag(dH): the eigenvalue
// derivative is the expectation of dH in the eigenvector. Refuses nearly
// degenerate levels, where the derivative of a single level is meaningless.
inline double hf_derivative(const JacobiMatrix& J, std::span<const double> dH_diag,
                            std::size_t which, double tol) {
    const std::size_t n = J.dim();
    if (dH_diag.size() != n)
        throw std::invalid_argument("hf_derivative: perturbation size mismatch");
    if (which >= n)
        throw std::invalid_argument("hf_derivative: eigenvalue index out of range");
    const std::size_t k = std::min(n, which + 2);
    SpectrumSlice s = lowest_eigenpairs(J, k, tol);
    const double sep = 1e-10 * std::max(1.0, J.inf_norm());
    if (which > 0 && s.pairs[which].value - s.pairs[which - 1].value < sep)
        throw DegeneracyError("hf_derivative: eigenvalue nearly degenerate with its lower neighbor");
    if (which + 1 < n && s.pairs[which + 1].value - s.pairs[which].value < sep)
        throw DegeneracyError("hf_derivative: eigenvalue nearly degenerate with its upper neighbor");
    return expectation(dH_diag, s.pairs[which].vector);
}

// Two lowest levels plus the structural diagnostics in one report.
inline GapReport gap_report(const JacobiMatrix& J, double bound, double tol) {
    if (J.dim() < 2)
        throw std::invalid_argument("gap_report: need dimension >= 2");
    SpectrumSlice s = lowest_eigenpairs(J, 2, tol);
    GapReport r;
    r.lambda1 = s.pairs[0].value;
    r.lambda2 = s.pairs[1].value;
    r.gap = r.lambda2 - r.lambda1;
    r.bound = bound;
    r.margin = r.gap - bound;
    const NodeList nl = nodes(s.pairs[1].vector);
    r.node_position = nl.positions.empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : nl.positions.front();
    r.sign_regions = find_sign_regions(s.pairs[1].vector, s.pairs[0].vector);
    r.ground_state_monotone = detail::nonincreasing(s.pairs[0].vector, 1e-12);
    return r;
}

// Ground state of the unit-linear family: positive, and strictly decreasing
// once the slope is positive (constant-allowing for slope zero).
inline bool check_ground_monotone(std::span<const double> u1, double alpha) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("check_ground_monotone: slope must be >= 0");
    if (u1.size() < 2)
        throw std::invalid_argument("check_ground_monotone: need size >= 2");
    if (!detail::effectively_positive(u1)) return false;
    const double amax = detail::max_abs(u1);
    if (amax == 0.0) return false;
    if (alpha == 0.0) return detail::nonincreasing(u1, 1e-12);
    const double floor = kTailFloor * amax;
    const double slack = 1e3 * std::numeric_limits<double>::epsilon() * amax;
    for (std::size_t i = 0; i + 1 < u1.size(); ++i) {
        if (std::fabs(u1[i]) <= floor) {
            if (u1[i + 1] > u1[i] + slack) return false;   // tail may only keep shrinking
            continue;
        }
        if (!(u1[i + 1] < u1[i] * (1.0 - 1e-12))) return false;
    }
    return true;
}

// First node of the second state sits at or left of the path center.
inline bool check_node_left_of_center(std::span<const double> u2) {
    const NodeList nl = nodes(u2);
    if (nl.positions.empty())
        throw std::invalid_argument("check_node_left_of_center: vector has no node");
    const double center = 0.5 * static_cast<double>(u2.size() + 1);
    return nl.positions.front() <= center + 1e-9;
}

// First node of u(l2) for the unit-linear family at each slope in the list.
inline std::vector<double> node_trajectory(std::size_t N, std::span<const double> alphas,
                                           double tol) {
    if (N < 2)
        throw std::invalid_argument("node_trajectory: need N >= 2");
    std::vector<double> out;
    out.reserve(alphas.size());
    double prev = -std::numeric_limits<double>::infinity();
    for (double a : alphas) {
        if (!(a >= 0.0) || a < prev)
            throw std::invalid_argument("node_trajectory: slopes must be ascending and >= 0");
        prev = a;
        const JacobiMatrix J = build_path(unit_linear_path(N, a));
        const EigenPair p = eigenpair(J, 1, tol);
        const NodeList nl = nodes(p.vector);
        if (nl.positions.empty())
            throw std::runtime_error("node_trajectory: second state lost its node");
        out.push_back(nl.positions.front());
    }
    return out;
}

// Reflection ordering of the second state around its node at x in [m, m+1):
// each mirrored pair satisfies u_a <= -u_b, checked in division-free form.
// Pairs that leave 1..N or whose positive-side entry is below the noise floor
// are skipped. Requires the node at or left of the center.
inline bool check_ordering(std::span<const double> u2, double node_x) {
    const std::size_t N = u2.size();
    if (N < 2)
        throw std::invalid_argument("check_ordering: need size >= 2");
    const double center = 0.5 * static_cast<double>(N + 1);
    if (node_x > center + 1e-9)
        throw std::invalid_argument("check_ordering: node must sit at or left of the center");
    const long m = static_cast<long>(std::floor(node_x + 1e-12));
    if (m < 1 || m >= static_cast<long>(N))
        throw std::invalid_argument("check_ordering: node position out of range");
    const double amax = detail::max_abs(u2);
    const double floor = kTailFloor * amax;
    const double slack = 1e-10 * amax;

    const auto pair_ok = [&](long a, long b) {
        if (a > static_cast<long>(N) || b < 1) return true;
        const double ua = u2[static_cast<std::size_t>(a - 1)];
        const double ub = u2[static_cast<std::size_t>(b - 1)];
        if (std::fabs(ub) <= floor) return true;
        if (ub < 0.0) return false;          // positive-side entry with the wrong sign
        return ua + ub <= slack;             // u_a / u_b <= -1 without the division
    };

    if (node_x <= static_cast<double>(m) + 0.5 + 1e-12) {
        for (long k = 0; k <= m - 1; ++k)
            if (!pair_ok(m + 1 + k, m - k)) return false;
    } else {
        for (long k = 1; k <= m; ++k)
            if (!pair_ok(m + 1 + k, m + 1 - k)) return false;
    }
    return true;
}

// Separation argument: if the comparison sequence theta is nonpositive on the
// window [m, n] (strictly negative somewhere), u_mu must place a node between
// the nodes eta < xi of u_lambda that bracket the window. Both vectors are
// extended by zero boundary nodes at coordinates 0 and N+1.
inline bool verify_node_separation(std::span<const double> u_mu, std::span<const double> u_lambda,
                                   const ThetaSeq& theta, std::size_t m, std::size_t n) {
    const std::size_t N = u_lambda.size();
    if (u_mu.size() != N || theta.theta.size() != N)
        throw std::invalid_argument("verify_node_separation: size mismatch");
    if (m < 1 || m > n || n > N)
        throw std::invalid_argument("verify_node_separation: window out of range");

    double tmax = 1.0;
    for (double t : theta.theta) tmax = std::max(tmax, std::fabs(t));
    const double ttol = 1e-12 * tmax;
    bool strict = false;
    for (std::size_t i = m; i <= n; ++i) {
        const double t = theta.theta[i - 1];
        if (t > ttol)
            throw std::domain_error("verify_node_separation: comparison sequence is positive on the window");
        if (t < -ttol) strict = true;
    }
    if (!strict)
        throw std::domain_error("verify_node_separation: comparison sequence vanishes on the whole window");

    const auto extended_nodes = [N](std::span<const double> u) {
        std::vector<double> e(N + 2, 0.0);
        for (std::size_t i = 0; i < N; ++i) e[i + 1] = u[i];
        NodeList nl = nodes(e);
        for (double& x : nl.positions) x -= 1.0;   // back to coordinates 0..N+1
        return nl.positions;
    };

    const std::vector<double> lam_nodes = extended_nodes(u_lambda);
    double eta = std::numeric_limits<double>::quiet_NaN();
    double xi = std::numeric_limits<double>::quiet_NaN();
    for (double x : lam_nodes) {
        if (x >= static_cast<double>(m) - 1.0 - 1e-12 && x < static_cast<double>(m)) eta = x;
        if (std::isnan(xi) && x > static_cast<double>(n) && x <= static_cast<double>(n) + 1.0 + 1e-12)
            xi = x;
    }
    if (std::isnan(eta) || std::isnan(xi))
        throw std::invalid_argument("verify_node_separation: u_lambda has no bracketing nodes");
    for (double x : lam_nodes)
        if (x > eta + 1e-12 && x < xi - 1e-12)
            throw std::invalid_argument("verify_node_separation: bracketing nodes are not adjacent");

    for (double x : extended_nodes(u_mu))
        if (x > eta + 1e-12 && x < xi - 1e-12) return true;
    return false;
}

// Cauchy interlacing of J against its leading principal submatrix of order
// dim-1, within slack.
inline bool verify_interlacing(const JacobiMatrix& J, double slack = 1e-9) {
    const std::size_t n = J.dim();
    if (n < 2)
        throw std::invalid_argument("verify_interlacing: need dimension >= 2");
    const JacobiMatrix B = J.leading_principal_submatrix(n - 1);
    const double tol = 1e-13;
    const std::vector<double> lam = eigenvalues_lowest(J, n, tol);
    const std::vector<double> mu = eigenvalues_lowest(B, n - 1, tol);
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (mu[i] < lam[i] - slack || mu[i] > lam[i + 1] + slack) return false;
    return true;
}

// The 3x3 comparison block B(delta) = tridiag(-1; 2-delta, 2+alpha, 2+2alpha; -1):
// its middle eigenvalue equals 2+alpha at delta = 0 and does not increase in
// delta, checked by a central difference.
struct UpperCheckResult {
    double mu2_at_zero = 0.0;
    double mu2_at_delta = 0.0;
    double slope = 0.0;
    bool value_ok = false;
    bool slope_ok = false;
};

inline UpperCheckResult lemma_upper_check(double alpha, double delta) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("lemma_upper_check: alpha must be >= 0");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("lemma_upper_check: delta must be in [0, 1]");
    const auto mu2 = [alpha](double dd) {
        const JacobiMatrix B({2.0 - dd, 2.0 + alpha, 2.0 + 2.0 * alpha}, {1.0, 1.0});
        return eigenpair(B, 1, 1e-13).value;
    };
    UpperCheckResult r;
    r.mu2_at_zero = mu2(0.0);
    r.mu2_at_delta = mu2(delta);
    r.value_ok = std::fabs(r.mu2_at_zero - (2.0 + alpha)) <= 1e-12;
    const double h = 1e-5 * (1.0 + delta);
    r.slope = (mu2(delta + h) - mu2(delta - h)) / (2.0 * h);
    r.slope_ok = r.slope <= 1e-8;
    return r;
}

// At the fractional point i+eps of a unit-linear-potential eigenvector, the
// three-term recurrence holds with some effective index j in [i, i+1]:
//   u_{i-1+eps} + u_{i+1+eps} = (2 + alpha (j-1) - lambda) u_{i+eps}.
// Returns that j (i+eps when alpha is zero after checking the residual).
// 1-based i in [1, N-1]; u_{i} and u_{i+1} must carry the same sign.
inline double convex_combination_recurrence_check(std::span<const double> u, double alpha,
                                                  double lambda, std::size_t i, double eps) {
    const std::size_t N = u.size();
    if (N < 2 || i < 1 || i >= N)
        throw std::invalid_argument("convex_combination_recurrence_check: index out of range");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("convex_combination_recurrence_check: eps must be in [0, 1]");
    const double floor = kTailFloor * detail::max_abs(u);
    const double ui = u[i - 1], un = u[i];
    if (std::fabs(ui) <= floor || std::fabs(un) <= floor || ui * un <= 0.0)
        throw std::invalid_argument(
            "convex_combination_recurrence_check: i is a generalized zero of u");

    const auto ext = [&](long t) {   // fictitious boundary extension, 1-based t
        if (t < 1) return u[0];
        if (t > static_cast<long>(N)) return u[N - 1];
        return u[static_cast<std::size_t>(t - 1)];
    };
    const auto frac = [&](long t) { return (1.0 - eps) * ext(t) + eps * ext(t + 1); };

    const long li = static_cast<long>(i);
    const double a = frac(li - 1) + frac(li + 1);
    const double b = frac(li);
    if (std::fabs(alpha) <= 1e-15) {
        const double resid = a - (2.0 - lambda) * b;
        const double scale = std::fabs(a) + std::fabs((2.0 - lambda) * b) + 1.0;
        if (std::fabs(resid) > 1e-9 * scale)
            throw std::domain_error(
                "convex_combination_recurrence_check: recurrence residual too large at zero slope");
        return static_cast<double>(i) + eps;
    }
    const double j = 1.0 + (a / b - 2.0 + lambda) / alpha;
    const double lo = static_cast<double>(i), hi = static_cast<double>(i) + 1.0;
    // a/b inherits the solver's rowwise residual amplified by amax/|b|, so
    // the acceptance band widens for entries deep in a decaying tail. The
    // 1e-12 factor matches the solver's default residual target.
    const double amax = detail::max_abs(u);
    const double rownorm = 2.0 + std::fabs(alpha) * static_cast<double>(N) + std::fabs(lambda);
    const double slack = 1e-9 * std::max(1.0, hi) +
                         1e-12 * rownorm * amax / (std::fabs(b) * std::fabs(alpha));
    if (j < lo - slack || j > hi + slack)
        throw std::domain_error(
            "convex_combination_recurrence_check: no effective index inside [i, i+1]");
    return std::clamp(j, lo, hi);
}

// theta_i = (W_mu_i - W_lambda_i) - (mu - lambda), the comparison sequence
// between two operator/eigenvalue pairs on the same graph.
inline ThetaSeq make_theta(std::span<const double> w_mu, std::span<const double> w_lambda,
                           double mu, double lambda) {
    if (w_mu.size() != w_lambda.size())
        throw std::invalid_argument("make_theta: size mismatch");
    ThetaSeq t;
    t.theta.resize(w_mu.size());
    for (std::size_t i = 0; i < w_mu.size(); ++i)
        t.theta[i] = (w_mu[i] - w_lambda[i]) - (mu - lambda);
    return t;
}

} // namespace specgap
