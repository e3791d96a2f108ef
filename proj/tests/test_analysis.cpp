#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace specgap;
using testutil::flat_path_bound;

namespace {

// Second state over ground state of a path operator, solver defaults.
std::pair<EigenPair, EigenPair> two_states(const JacobiMatrix& J) {
    SpectrumSlice s = lowest_eigenpairs(J, 2, 1e-12);
    return {std::move(s.pairs[0]), std::move(s.pairs[1])};
}

std::size_t sign_changes(const std::vector<double>& d, double tie) {
    int prev = 0;
    std::size_t count = 0;
    for (double x : d) {
        if (std::fabs(x) <= tie) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

} // namespace

TEST_CASE("nodes of the piecewise-linear interpolant") {
    CHECK(nodes(std::vector<double>{1.0, -1.0}).positions ==
          std::vector<double>{1.5});
    CHECK(nodes(std::vector<double>{1.0, 0.0, -1.0}).positions ==
          std::vector<double>{2.0});
    CHECK(nodes(std::vector<double>{0.0, 1.0}).positions == std::vector<double>{1.0});
    CHECK(nodes(std::vector<double>{1.0, 2.0}).positions.empty());
}

TEST_CASE("generalized zero count skips sub-floor dust") {
    CHECK(generalized_zero_count(std::vector<double>{1.0, -1.0}) == 1);
    CHECK(generalized_zero_count(std::vector<double>{1.0, 1e-20, -1.0}) == 1);
    CHECK(generalized_zero_count(std::vector<double>{1.0, -1.0, 1.0}) == 2);
    CHECK(generalized_zero_count(std::vector<double>{1.0, 1.0}) == 0);
}

TEST_CASE("expectation sums w u^2") {
    CHECK(expectation(std::vector<double>{0.0, 1.0}, std::vector<double>{2.0, 3.0}) == 9.0);
    CHECK_THROWS_AS(expectation(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("gap_report on pinned operators") {
    const GapReport r4 = gap_report(build_path(flat_path(4)), flat_path_bound(4), 1e-12);
    CHECK(std::fabs(r4.margin) <= 1e-10);
    CHECK(r4.lambda1 == Catch::Approx(0.0).margin(1e-11));
    CHECK(r4.node_position == Catch::Approx(2.5).margin(1e-9));
    CHECK(r4.ground_state_monotone);

    SplitMix64 rng(21);
    for (int t = 0; t < 25; ++t) {
        const std::size_t N = 3 + rng.next() % 30;
        const GapReport r =
            gap_report(build_path(random_convex_path(N, rng.next(), 1.0)), flat_path_bound(N), 1e-12);
        CHECK(r.margin >= -1e-9);
        CHECK(r.gap == Catch::Approx(r.lambda2 - r.lambda1).margin(1e-15));
        CHECK(r.sign_regions.m < r.sign_regions.n);
    }

    const GapReport rc = gap_report(build_hypercube_reduced(flat_hamming(6), false), 2.0, 1e-12);
    CHECK(std::fabs(rc.margin) <= 1e-10);

    CHECK_THROWS_AS(gap_report(JacobiMatrix({1.0}, {}), 0.0, 1e-12), std::invalid_argument);
}

TEST_CASE("sign regions on pinned and random states") {
    // flat P2: both squared states are equal, the tie rule splits at the center
    const auto [g2, e2] = two_states(build_path(flat_path(2)));
    const SignRegions r2 = find_sign_regions(e2.vector, g2.vector);
    CHECK(r2.m == 1);
    CHECK(r2.n == 2);

    // flat P9: the negative block of u2^2 - u1^2 is centered, so n = N - m
    const auto [g9, e9] = two_states(build_path(flat_path(9)));
    const SignRegions r9 = find_sign_regions(e9.vector, g9.vector);
    CHECK(r9.m >= 1);
    CHECK(r9.n == 9 - r9.m);

    SplitMix64 rng(22);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t N = 2 + rng.next() % 49;
        const auto [g, e] = two_states(build_path(random_convex_path(N, rng.next(), 1.0)));
        const SignRegions r = find_sign_regions(e.vector, g.vector);
        CHECK(r.m >= 1);
        CHECK(r.m < r.n);
        CHECK(r.n <= N);

        const double amax = std::max(detail::max_abs(g.vector), detail::max_abs(e.vector));
        const double tie = 1e-11 * amax * amax;
        std::vector<double> d(N);
        for (std::size_t i = 0; i < N; ++i)
            d[i] = e.vector[i] * e.vector[i] - g.vector[i] * g.vector[i];
        CHECK(sign_changes(d, tie) <= 2);
        // every strictly negative entry lies in [m, n]; it can touch m only
        // when the block reaches vertex 1 and the anchor is clamped there
        for (std::size_t i = 0; i < N; ++i)
            if (d[i] < -tie) {
                if (r.m > 1) CHECK(i + 1 > r.m);
                CHECK(i + 1 >= r.m);
                CHECK(i + 1 <= r.n);
            }
    }

    CHECK_THROWS_AS(find_sign_regions(std::vector<double>{1.0, -1.0},
                                      std::vector<double>{1.0, -1.0}),
                    std::invalid_argument);   // ground state must be positive
    CHECK_THROWS_AS(find_sign_regions(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("ratio of the two states is nonincreasing for any couplings") {
    SplitMix64 rng(23);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + rng.next() % 11;
        const JacobiMatrix J = testutil::random_jacobi(rng, n);
        const auto [g, e] = two_states(J);
        const double slack = 1e-10 * detail::max_abs(g.vector) * detail::max_abs(e.vector);
        for (std::size_t i = 0; i + 1 < n; ++i)
            CHECK(e.vector[i + 1] * g.vector[i] - e.vector[i] * g.vector[i + 1] <= slack);
    }
}

TEST_CASE("casoratian telescopes on the path") {
    const auto [g, e] = two_states(build_path(flat_path(2)));
    const CasoratianSeq seq = casoratian(e.vector, g.vector, e.value - g.value);
    CHECK_FALSE(seq.weighted);
    CHECK(seq.first_index == 0);
    REQUIRE(seq.w.size() == 3);
    CHECK(seq.w[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(seq.w[1] == Catch::Approx(-1.0).margin(1e-10));
    CHECK(seq.w[2] == Catch::Approx(0.0).margin(1e-12));

    SplitMix64 rng(24);
    for (int t = 0; t < 50; ++t) {
        const std::size_t N = 3 + rng.next() % 28;
        const auto [g1, e1] = two_states(build_path(random_convex_path(N, rng.next(), 1.0)));
        const CasoratianSeq s = casoratian(e1.vector, g1.vector, e1.value - g1.value);
        REQUIRE(s.w.size() == N + 1);
        CHECK(s.w.front() == 0.0);
        CHECK(s.w.back() == 0.0);
        // nonpositive throughout: the same sequence that makes the two-state
        // ratio nonincreasing
        const double amax = detail::max_abs(g1.vector) * detail::max_abs(e1.vector);
        for (double x : s.w) CHECK(x <= 1e-10 * amax);
    }

    CHECK_THROWS_AS(casoratian(std::vector<double>{1.0, -1.0}, std::vector<double>{1.0, -1.0}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("weighted casoratian is negative across the reduced cube") {
    SplitMix64 rng(25);
    for (int N : {2, 4, 8}) {
        const HammingPotential W = random_convex_hamming(N, rng.next(), 1.0);
        const JacobiMatrix J = build_hypercube_reduced(W, true);
        const auto [g, e] = two_states(J);
        const VPrimeTransform T = vprime_transform(N);
        const std::vector<double> g2 = apply_vprime(T, g.vector);
        const std::vector<double> e2 = apply_vprime(T, e.vector);
        const CasoratianSeq s = casoratian(e2, g2, e.value - g.value, T.c);
        CHECK(s.weighted);
        CHECK(s.first_index == -1);
        // reduced vectors have N + 1 entries at coordinates 0..N, so the
        // zero-extended pairs span x = -1..N: one entry per edge plus ends
        REQUIRE(s.w.size() == static_cast<std::size_t>(N) + 2);
        CHECK(s.w.front() == 0.0);
        CHECK(s.w.back() == 0.0);
        for (std::size_t i = 1; i + 1 < s.w.size(); ++i) CHECK(s.w[i] < 0.0);
    }
}

TEST_CASE("eigenvalue derivative matches the expectation of the perturbation") {
    // flat P2 ground state spreads half its weight on each vertex
    const JacobiMatrix P2 = build_path(flat_path(2));
    CHECK(hf_derivative(P2, std::vector<double>{0.0, 1.0}, 0, 1e-12) ==
          Catch::Approx(0.5).margin(1e-12));

    // central difference cross-check on a convex potential
    const std::size_t N = 8;
    const double alpha = 0.7;
    SplitMix64 rng(26);
    const std::vector<double> base = random_convex_values(N, rng.next(), 0.5);
    std::vector<double> dir(N);
    for (std::size_t i = 0; i < N; ++i) dir[i] = static_cast<double>(i);
    const auto gap_at = [&](double t) {
        std::vector<double> w = base;
        for (std::size_t i = 0; i < N; ++i) w[i] += t * dir[i];
        const std::vector<double> lam = eigenvalues_lowest(build_path(PathPotential(w)), 2, 1e-13);
        return lam[1] - lam[0];
    };
    std::vector<double> w0 = base;
    for (std::size_t i = 0; i < N; ++i) w0[i] += alpha * dir[i];
    const JacobiMatrix J = build_path(PathPotential(w0));
    const double hf = hf_derivative(J, dir, 1, 1e-13) - hf_derivative(J, dir, 0, 1e-13);
    const double h = 1e-5 * (1.0 + alpha);
    const double fd = (gap_at(alpha + h) - gap_at(alpha - h)) / (2.0 * h);
    CHECK(std::fabs(hf - fd) <= 1e-5 * std::max({1.0, std::fabs(hf), std::fabs(fd)}));

    CHECK_THROWS_AS(hf_derivative(P2, std::vector<double>{0.0}, 0, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(hf_derivative(P2, std::vector<double>{0.0, 1.0}, 2, 1e-12),
                    std::invalid_argument);
}

TEST_CASE("nearly degenerate levels refuse a single-level derivative") {
    const JacobiMatrix J({0.0, 0.0}, {1e-11});
    CHECK_THROWS_AS(hf_derivative(J, std::vector<double>{0.0, 1.0}, 0, 1e-6), DegeneracyError);
}

TEST_CASE("gap of the unit-linear family never loses slope") {
    for (std::size_t N : {5, 12, 30}) {
        std::vector<double> dir(N);
        for (std::size_t i = 0; i < N; ++i) dir[i] = static_cast<double>(i);
        for (int k = 0; k <= 10; ++k) {
            const double alpha = 0.5 * k;
            const JacobiMatrix J = build_path(unit_linear_path(N, alpha));
            const double d =
                hf_derivative(J, dir, 1, 1e-13) - hf_derivative(J, dir, 0, 1e-13);
            CHECK(d >= -1e-8);
        }
    }
}

TEST_CASE("ground state of the unit-linear family decreases") {
    const auto ground = [](std::size_t N, double alpha) {
        return eigenpair(build_path(unit_linear_path(N, alpha)), 0, 1e-12).vector;
    };
    CHECK(check_ground_monotone(ground(10, 0.0), 0.0));
    CHECK(check_ground_monotone(ground(12, 1.0), 1.0));
    CHECK(check_ground_monotone(ground(6, 1e-6), 1e-6));
    CHECK_FALSE(check_ground_monotone(std::vector<double>{1.0, 2.0, 3.0}, 1.0));
    CHECK_FALSE(check_ground_monotone(std::vector<double>{1.0, -0.5}, 1.0));
    CHECK_THROWS_AS(check_ground_monotone(std::vector<double>{1.0, 0.5}, -1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_ground_monotone(std::vector<double>{1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("first node of the second state stays left of the center") {
    const auto second = [](std::size_t N, double alpha) {
        return eigenpair(build_path(unit_linear_path(N, alpha)), 1, 1e-12).vector;
    };
    CHECK(check_node_left_of_center(second(8, 0.0)));    // flat: exactly central
    CHECK(check_node_left_of_center(second(15, 2.0)));

    for (std::size_t N = 4; N <= 32; N += 7)
        for (int k = 0; k <= 40; ++k)
            CHECK(check_node_left_of_center(second(N, 0.25 * k)));

    CHECK_THROWS_AS(check_node_left_of_center(std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("node trajectory marches left as the slope grows") {
    const std::vector<double> single = node_trajectory(9, std::vector<double>{0.0}, 1e-12);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == Catch::Approx(5.0).margin(1e-9));

    const std::vector<double> alphas{0.0, 0.5, 1.0, 2.0, 4.0};
    const std::vector<double> traj = node_trajectory(10, alphas, 1e-12);
    REQUIRE(traj.size() == alphas.size());
    CHECK(traj[0] == Catch::Approx(5.5).margin(1e-9));
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) CHECK(traj[i + 1] < traj[i]);

    // strong tilt pushes the node into the first edge but never past it
    const std::vector<double> tight = node_trajectory(4, std::vector<double>{50.0}, 1e-12);
    CHECK(tight[0] >= 1.0);
    CHECK(tight[0] < 2.0);

    CHECK_THROWS_AS(node_trajectory(1, alphas, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(node_trajectory(6, std::vector<double>{1.0, 0.5}, 1e-12),
                    std::invalid_argument);
    CHECK_THROWS_AS(node_trajectory(6, std::vector<double>{-1.0}, 1e-12), std::invalid_argument);
}

TEST_CASE("reflection ordering around the node") {
    const auto second_and_node = [](std::size_t N, double alpha) {
        const EigenPair p = eigenpair(build_path(unit_linear_path(N, alpha)), 1, 1e-12);
        return std::pair{p.vector, nodes(p.vector).positions.front()};
    };

    for (std::size_t N : {6, 9}) {   // flat paths sit exactly on the epsilon boundary
        const auto [u, x] = second_and_node(N, 0.0);
        CHECK(check_ordering(u, x));
    }
    {
        const auto [u, x] = second_and_node(11, 1.0);
        CHECK(check_ordering(u, x));
    }
    for (double alpha : {0.1, 1.0, 5.0})
        for (std::size_t N = 5; N <= 25; N += 5) {
            const auto [u, x] = second_and_node(N, alpha);
            CHECK(check_ordering(u, x));
        }

    const auto [u9, x9] = second_and_node(9, 0.5);
    CHECK_THROWS_AS(check_ordering(u9, 8.0), std::invalid_argument);   // right of center
    CHECK_THROWS_AS(check_ordering(std::vector<double>{1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("make_theta compares two potentials at matched levels") {
    const ThetaSeq t = make_theta(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.5},
                                  3.0, 2.5);
    CHECK(t.theta[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(t.theta[1] == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(make_theta(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, 0.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("node separation between consecutive states of one operator") {
    // same potential at both levels: theta = -(lambda3 - lambda2) < 0 on any
    // window, so the third state must put a node between the boundary node 0
    // and the second state's node
    for (auto [N, alpha] : std::vector<std::pair<std::size_t, double>>{{9, 0.0}, {11, 0.7}}) {
        const JacobiMatrix J = build_path(unit_linear_path(N, alpha));
        SpectrumSlice s = lowest_eigenpairs(J, 3, 1e-12);
        const auto& u2 = s.pairs[1].vector;
        const auto& u3 = s.pairs[2].vector;
        const double x2 = nodes(u2).positions.front();
        const std::size_t n = static_cast<std::size_t>(std::ceil(x2)) - 1;
        REQUIRE(n >= 1);
        const std::vector<double> w(N, 0.0);
        const ThetaSeq theta = make_theta(w, w, s.pairs[2].value, s.pairs[1].value);
        CHECK(verify_node_separation(u3, u2, theta, 1, n));
    }
}

TEST_CASE("node separation across two slopes of the linear family") {
    std::size_t confirmed = 0;
    for (double a1 : {0.3, 0.8, 1.5})
        for (double da : {0.05, 0.1}) {
            const std::size_t N = 9;
            const JacobiMatrix J1 = build_path(unit_linear_path(N, a1));
            const JacobiMatrix J2 = build_path(unit_linear_path(N, a1 + da));
            const EigenPair p1 = eigenpair(J1, 1, 1e-12);
            const EigenPair p2 = eigenpair(J2, 1, 1e-12);
            const ThetaSeq theta = make_theta(unit_linear_path(N, a1 + da).values,
                                              unit_linear_path(N, a1).values,
                                              p2.value, p1.value);
            // theta increases with the vertex index; the window must cover the
            // whole stretch up to u(lambda)'s node cell so the bracketing
            // nodes 0 and x1 are adjacent
            const double x1 = nodes(p1.vector).positions.front();
            std::size_t prefix = 0;
            for (std::size_t i = 0; i < N; ++i)
                if (theta.theta[i] <= 0.0) prefix = i + 1; else break;
            const std::size_t n = static_cast<std::size_t>(std::ceil(x1)) - 1;
            if (n < 1 || prefix < n) continue;
            CHECK(verify_node_separation(p2.vector, p1.vector, theta, 1, n));
            ++confirmed;
        }
    CHECK(confirmed >= 3);
}

TEST_CASE("node separation rejects inapplicable windows") {
    const std::size_t N = 9;
    const JacobiMatrix J1 = build_path(unit_linear_path(N, 0.5));
    const JacobiMatrix J2 = build_path(unit_linear_path(N, 1.0));
    const EigenPair p1 = eigenpair(J1, 1, 1e-12);
    const EigenPair p2 = eigenpair(J2, 1, 1e-12);

    // positive comparison sequence: roles swapped
    const ThetaSeq bad = make_theta(unit_linear_path(N, 0.5).values,
                                    unit_linear_path(N, 1.0).values, p1.value, p2.value);
    CHECK(bad.theta[0] > 0.0);
    CHECK_THROWS_AS(verify_node_separation(p1.vector, p2.vector, bad, 1, 1), std::domain_error);

    // identically zero comparison sequence
    const ThetaSeq zero = make_theta(unit_linear_path(N, 0.5).values,
                                     unit_linear_path(N, 0.5).values, p1.value, p1.value);
    CHECK_THROWS_AS(verify_node_separation(p1.vector, p1.vector, zero, 1, N), std::domain_error);

    // out-of-range window
    const ThetaSeq ok = make_theta(unit_linear_path(N, 1.0).values,
                                   unit_linear_path(N, 0.5).values, p2.value, p1.value);
    CHECK_THROWS_AS(verify_node_separation(p2.vector, p1.vector, ok, 0, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_node_separation(p2.vector, p1.vector, ok, 3, N + 1),
                    std::invalid_argument);
}

TEST_CASE("interlacing holds for truncations") {
    CHECK(verify_interlacing(JacobiMatrix({0.0, 0.0}, {1.0})));

    SplitMix64 rng(27);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng.next() % 11;
        CHECK(verify_interlacing(testutil::random_jacobi(rng, n)));
    }
    CHECK_THROWS_AS(verify_interlacing(JacobiMatrix({1.0}, {})), std::invalid_argument);
}

TEST_CASE("three-point comparison block bounds its middle level") {
    for (double alpha : {0.0, 0.5, 1.0, 3.0}) {
        const UpperCheckResult r = lemma_upper_check(alpha, 0.0);
        CHECK(r.value_ok);
        CHECK(r.mu2_at_zero == Catch::Approx(2.0 + alpha).margin(1e-12));
    }
    const UpperCheckResult r1 = lemma_upper_check(1.0, 1.0);
    CHECK(r1.mu2_at_delta < 3.0);
    CHECK(r1.slope_ok);
    for (double alpha : {0.0, 1.0, 2.0})
        for (double delta : {0.1, 0.5, 1.0})
            CHECK(lemma_upper_check(alpha, delta).slope_ok);
    CHECK_THROWS_AS(lemma_upper_check(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lemma_upper_check(1.0, 1.5), std::invalid_argument);
}

TEST_CASE("fractional recurrence points carry an effective index in [i, i+1]") {
    const std::size_t N = 9;
    const double alpha = 1.0;
    const JacobiMatrix J = build_path(unit_linear_path(N, alpha));
    const EigenPair p = eigenpair(J, 1, 1e-12);

    // the node sits at x = 1.39, so the first same-sign pair is i = 2; the
    // endpoints reproduce the plain recurrence at the stencil center exactly
    CHECK(convex_combination_recurrence_check(p.vector, alpha, p.value, 2, 0.0) ==
          Catch::Approx(2.0).margin(1e-6));
    CHECK(convex_combination_recurrence_check(p.vector, alpha, p.value, 2, 1.0) ==
          Catch::Approx(3.0).margin(1e-6));
    const double mid = convex_combination_recurrence_check(p.vector, alpha, p.value, 2, 0.5);
    CHECK(mid >= 2.0);
    CHECK(mid <= 3.0);

    // zero slope reduces to the plain recurrence at i + eps
    const JacobiMatrix F = build_path(flat_path(6));
    const EigenPair pf = eigenpair(F, 1, 1e-12);
    CHECK(convex_combination_recurrence_check(pf.vector, 0.0, pf.value, 1, 0.25) ==
          Catch::Approx(1.25).margin(1e-12));

    // the node of the second state sits between sign-split entries
    const NodeList nl = nodes(p.vector);
    const std::size_t node_i = static_cast<std::size_t>(std::floor(nl.positions.front()));
    CHECK_THROWS_AS(convex_combination_recurrence_check(p.vector, alpha, p.value, node_i, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(convex_combination_recurrence_check(p.vector, alpha, p.value, 0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(convex_combination_recurrence_check(p.vector, alpha, p.value, N, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(convex_combination_recurrence_check(p.vector, alpha, p.value, 1, 1.5),
                    std::invalid_argument);
}
