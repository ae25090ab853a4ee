#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "birkhoff/errors.hpp"
#include "birkhoff/numerics.hpp"
#include "birkhoff/spectrum.hpp"
#include "birkhoff/systems.hpp"
#include "oracles.hpp"

using namespace birkhoff;

namespace {

void check_point_identities(const System& sys, const SpectrumPoint& pt) {
    CHECK(pt.residual_p <= 1e-8);
    CHECK(pt.residual_dp <= 1e-8);
    CHECK(pt.q > 0);
    CHECK(std::fabs(pt.mean_tau - pt.alpha) / pt.alpha <= 1e-8);
    CHECK(std::fabs(pt.entropy - pt.b * pt.lyapunov) <= 1e-8);
    (void)sys;
}

}  // namespace

TEST_CASE("alpha_min per system") {
    CHECK(alpha_min(make_lueroth(2)) == 1.0);
    CHECK(alpha_min(make_gauss(2)) == 1.0);
    CHECK(alpha_min(make_mp_induced(2.0)) == 1.0);
    CHECK(alpha_min(make_linear_exp(0.5)) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("two-branch system: newton matches the grid-search oracle") {
    System two = make_finite_linear({0.5, 0.5}, {1, 2});
    auto oracle = oracles::grid_search_point(two, 1.5);
    SpectrumPoint pt = solve_point(two, 1.5, 0.5, 0.7);
    CHECK(std::fabs(pt.q - oracle.q) < 1e-6);
    CHECK(std::fabs(pt.b - oracle.b) < 1e-6);
    check_point_identities(two, pt);
}

TEST_CASE("truncated lueroth: newton matches the grid-search oracle at alpha=3") {
    System lt = truncate_system(make_lueroth(2), 50);
    auto oracle = oracles::grid_search_point(lt, 3.0);
    SpectrumPoint pt = solve_point(lt, 3.0, 0.2, 0.7);
    CHECK(std::fabs(pt.q - oracle.q) < 1e-6);
    CHECK(std::fabs(pt.b - oracle.b) < 1e-6);
    check_point_identities(lt, pt);
}

TEST_CASE("solve_point validates inputs") {
    System s = make_lueroth(2);
    CHECK_THROWS_AS(solve_point(s, 0.5, 0.1, 0.9), ParamError);   // alpha <= alpha_min
    CHECK_THROWS_AS(solve_point(s, 3.0, -0.1, 0.9), ParamError);  // q0 <= 0
}

TEST_CASE("degenerate spectrum is refused") {
    // constant tau: Var(tau) = 0 under every Gibbs measure
    System flat = make_finite_linear({0.25, 0.25, 0.25, 0.25}, {2, 2, 2, 2});
    CHECK_THROWS_AS(solve_point(flat, 2.5, 0.5, 0.5), Error);
}

TEST_CASE("lueroth curve: identities, monotonicity, q-scan invariants") {
    System s = make_lueroth(2);
    auto grid = geometric_grid(10, 10000, 16);
    SolveOptions opt;
    opt.tolerance = 1e-9;
    SpectrumCurve c = solve_curve(s, grid, opt);
    REQUIRE(c.failures.empty());
    REQUIRE(c.points.size() == grid.size());
    CHECK(c.b_star == doctest::Approx(1.0).epsilon(1e-9));

    double prev_b = 0, prev_q = 1e300;
    for (const auto& pt : c.points) {
        check_point_identities(s, pt);
        CHECK(pt.b > prev_b);       // strictly increasing
        CHECK(pt.b < c.b_star);
        prev_b = pt.b;
    }
    // q strictly positive and decreasing beyond the first decade
    for (const auto& pt : c.points) {
        if (pt.alpha >= 100) {
            CHECK(pt.q < prev_q);
            prev_q = pt.q;
        }
    }
    // alpha q(alpha) decreasing on the final decade
    double prev_aq = 1e300;
    for (const auto& pt : c.points)
        if (pt.alpha >= 1000) {
            CHECK(pt.alpha * pt.q < prev_aq);
            prev_aq = pt.alpha * pt.q;
        }

    // Lemma-style q-scan at a mid point: p(alpha, q, b(alpha)) >= -tol for q > 0,
    // minimum over q is ~0 and attained near q(alpha)
    const SpectrumPoint& mid = c.points[8];
    QScan scan = q_scan(s, mid.alpha, mid.b, mid.q / 50, mid.q * 50, 60);
    CHECK(scan.most_negative >= -1e-7);
    CHECK(std::fabs(scan.min_value) < 1e-4);
    CHECK(scan.argmin_q / mid.q > 0.5);
    CHECK(scan.argmin_q / mid.q < 2.0);
}

TEST_CASE("derivative identity b' = q / lambda along a dense local grid") {
    System s = make_lueroth(2);
    // dense geometric grid around alpha = 100 (0.5% spacing)
    auto grid = geometric_grid(97, 103, 13);
    SpectrumCurve c = solve_curve(s, grid, {});
    REQUIRE(c.failures.empty());
    CHECK(check_derivative_identity(c) < 1e-3);
}

TEST_CASE("two-branch curve approaches its finite-alphabet limit") {
    System two = make_finite_linear({0.5, 0.5}, {1, 2});
    // alpha* = E tau at (0, b*): b* = 1 here (lengths sum to 1), uniform weights
    auto grid = geometric_grid(1.05, 1.45, 10);
    SpectrumCurve c = solve_curve(two, grid, {});
    CHECK(c.failures.empty());
    CHECK(c.b_star == doctest::Approx(1.0).epsilon(1e-10));
    for (const auto& pt : c.points) CHECK(pt.b < c.b_star);
    double prev = 0;
    for (const auto& pt : c.points) {
        CHECK(pt.b > prev);
        prev = pt.b;
    }
}

TEST_CASE("curves refuse grids touching alpha_min") {
    System s = make_lueroth(2);
    CHECK_THROWS_AS(solve_curve(s, {1.0, 2.0, 4.0}, {}), ParamError);
    CHECK_THROWS_AS(solve_curve(s, {4.0, 2.0}, {}), ParamError);  // not increasing
}

TEST_CASE("per-point failures are isolated") {
    System s = make_lueroth(2);
    SolveOptions opt;
    opt.max_iters = 1;  // force failures
    auto grid = geometric_grid(10, 100, 4);
    SpectrumCurve c = solve_curve(s, grid, opt);
    CHECK(c.points.size() + c.failures.size() == grid.size());
    CHECK(!c.failures.empty());
}

TEST_CASE("mp induced curve solves with residual identities") {
    System s = make_mp_induced(2.0);
    auto grid = geometric_grid(50, 5000, 8);
    SpectrumCurve c = solve_curve(s, grid, {});
    REQUIRE(c.failures.empty());
    for (const auto& pt : c.points) check_point_identities(s, pt);
    CHECK(c.points.back().b > c.points.front().b);
}

TEST_CASE("gauss curve at moderate alpha via the operator path") {
    System s = make_gauss(2);
    auto grid = geometric_grid(8, 120, 5);
    SolveOptions opt;
    opt.tolerance = 1e-8;
    SpectrumCurve c = solve_curve(s, grid, opt);
    REQUIRE(c.failures.size() <= 1);
    for (const auto& pt : c.points) {
        CHECK(pt.residual_p <= 1e-8);
        CHECK(pt.residual_dp <= 1e-8);
        CHECK(std::fabs(pt.entropy - pt.b * pt.lyapunov) <= 1e-8);
        CHECK(pt.b < 1.0);
    }
}
