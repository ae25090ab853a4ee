#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "birkhoff/errors.hpp"
#include "birkhoff/gauss_operator.hpp"
#include "birkhoff/pressure.hpp"
#include "birkhoff/systems.hpp"

using namespace birkhoff;

TEST_CASE("gauss operator at (0,1) has eigenvalue 1 and density 1/(1+x)") {
    // The Gauss measure is the equilibrium state: lambda = 1 exactly.
    GaussRuelleOp op;
    op.q = 0;
    op.b = 1;
    op.truncation = 20000;
    op.include_tail = true;
    GaussEigen e = gauss_eigen(op, 60, 512);
    CHECK(std::fabs(e.log_lambda) < 1e-9);
    CHECK(e.lower <= 1e-12);
    CHECK(e.upper >= -1e-12);
    // eigenfunction proportional to 1/(1+x)
    const double ratio0 = e.h.eval(0.0) / (1.0 / (1.0 + 0.0));
    for (double x : {0.1, 0.35, 0.5, 0.77, 1.0}) {
        const double r = e.h.eval(x) / (1.0 / (1.0 + x));
        CHECK(r == doctest::Approx(ratio0).epsilon(1e-8));
    }
}

TEST_CASE("bowen dimension of the gauss system: depth-2 truncation-200 sandwich") {
    System s = make_gauss(2);
    BowenResult b = gauss_bowen_dimension(s, 1e-6, 2, 200);
    CHECK(b.upper - b.lower < 0.02);
    CHECK(b.upper >= 0.99);
    CHECK(b.lower < 1.0);       // the 200-letter subsystem has dimension < 1
    CHECK(b.lower > 0.97);
}

TEST_CASE("truncated gauss dimension increases with the alphabet") {
    System s = make_gauss(2);
    double prev = 0;
    for (std::uint64_t N : {25, 50, 100, 200}) {
        BowenResult b = gauss_bowen_dimension(s, 1e-6, 1, N);
        CHECK(b.lower > prev);
        prev = b.lower;
    }
    CHECK(prev < 1.0);
}

TEST_CASE("gauss gibbs weights at (0,1) reproduce the gauss measure") {
    System s = make_gauss(2);
    GibbsMeasure g = gibbs_weights(s, {0, 0, 1}, 10000);
    // mu([1]) = (1/ln 2) ln(4/3)
    CHECK(g.letter_weights[0].second ==
          doctest::Approx(std::log(4.0 / 3.0) / std::log(2.0)).epsilon(1e-12));
    CHECK(g.mean_tau_infinite);
    // lyapunov = pi^2 / (6 ln 2)
    const double levy = M_PI * M_PI / (6 * std::log(2.0));
    CHECK(g.lyapunov == doctest::Approx(levy).epsilon(1e-6));
    CHECK(g.entropy == doctest::Approx(levy).epsilon(1e-6));
}

TEST_CASE("operator measure agrees with the closed form at (0,1)") {
    System s = make_gauss(2);
    // Drive the operator route by perturbing b infinitesimally off the ray.
    GibbsMeasure g = gauss_gibbs_weights(s, {0, 1e-12, 1.0}, 8, {});
    for (int a = 1; a <= 8; ++a) {
        const double closed = s.mu_letter(a);
        CHECK(g.letter_weights[a - 1].second == doctest::Approx(closed).epsilon(1e-4));
    }
    CHECK(g.normalization_defect == doctest::Approx(0.152).epsilon(0.01));  // mu(a > 8)
}

TEST_CASE("gauss pressure gradient against finite differences") {
    System s = make_gauss(2);
    const Potential pot{0, 0.1, 1.0};
    auto [dpq, dpb] = pressure_gradient(s, pot);
    EngineOptions opt;
    auto p = [&](double q, double b) { return gauss_moments(s, {0, q, b}, opt).pressure; };
    const double h = 1e-4;
    const double fd_q = (p(pot.q + h, pot.b) - p(pot.q - h, pot.b)) / (2 * h);
    const double fd_b = (p(pot.q, pot.b + h) - p(pot.q, pot.b - h)) / (2 * h);
    CHECK(std::fabs(fd_q - dpq) / std::fabs(dpq) < 1e-5);
    CHECK(std::fabs(fd_b - dpb) / std::fabs(dpb) < 1e-5);
}

TEST_CASE("gauss moments feed a consistent newton system") {
    System s = make_gauss(2);
    Moments mo = gauss_moments(s, {5.0, 0.3, 0.9}, {});
    CHECK(std::isfinite(mo.pressure));
    CHECK(mo.var_tau > 0);
    CHECK(mo.lyapunov > 0);
    // E[tau] > 1 always (tau >= 1)
    CHECK(5.0 - mo.dp_dq > 1.0);
}
