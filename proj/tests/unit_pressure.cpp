#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "birkhoff/errors.hpp"
#include "birkhoff/numerics.hpp"
#include "birkhoff/pressure.hpp"
#include "birkhoff/systems.hpp"

using namespace birkhoff;

TEST_CASE("zero pressure at (q=0, b=1) for measure-preserving builtins") {
    for (const System& s : {make_lueroth(2), make_lueroth(3), make_linear_poly(2, 1),
                            make_linear_count(2.2, 1.0, 0.7), make_linear_exp(0.5),
                            make_mp_induced(2.0)}) {
        auto est = pressure_locally_constant(s, {0, 0, 1}, 1e-7);
        INFO(s.desc.name);
        CHECK(std::fabs(est.value) < 1e-12);
        CHECK(est.lower <= 0.0);
        CHECK(est.upper >= 0.0);
    }
}

TEST_CASE("two equal branches of slope 2: closed forms") {
    System two = make_finite_linear({0.5, 0.5}, {1, 2});
    // q=0, b=1: Lebesgue is the equilibrium state, P = log(2 * 2^{-1}) = 0
    auto est = pressure_locally_constant(two, {0, 0, 1}, 1e-12);
    CHECK(std::fabs(est.value) < 1e-15);

    // mean tau = 1.5 under uniform weights
    GibbsMeasure g = gibbs_weights(two, {0, 0, 1}, 2);
    CHECK(g.mean_tau == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(g.letter_weights[0].second == doctest::Approx(0.5).epsilon(1e-14));

    // q=0.1: dP/dq = -sum w_a tau_a with w_a prop exp(-0.1 tau_a)/2
    const double w1 = std::exp(-0.1) / 2, w2 = std::exp(-0.2) / 2;
    const double expected = -(w1 * 1 + w2 * 2) / (w1 + w2);
    auto [dpq, dpb] = pressure_gradient(two, {0, 0.1, 1});
    CHECK(dpq == doctest::Approx(expected).epsilon(1e-13));
    CHECK(dpb == doctest::Approx(-(w1 * std::log(2.0) + w2 * std::log(2.0)) / (w1 + w2))
                     .epsilon(1e-13));
}

TEST_CASE("full N-shift entropy") {
    // N equal branches, zero potential: P = log N
    std::vector<double> lens(8, 1.0 / 8), taus(8, 1.0);
    for (int i = 0; i < 8; ++i) taus[i] = i + 1;
    System s = make_finite_linear(lens, taus);
    auto est = pressure_locally_constant(s, {0, 0, 0}, 1e-12);
    CHECK(est.value == doctest::Approx(std::log(8.0)).epsilon(1e-14));
}

TEST_CASE("lueroth gibbs weights at (0,1) are the branch lengths") {
    System s = make_lueroth(2);
    GibbsMeasure g = gibbs_weights(s, {0, 0, 1}, 10000);
    CHECK(g.letter_weights[0].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.letter_weights[4].second == doctest::Approx(1.0 / 30).epsilon(1e-12));
    CHECK(g.normalization_defect < 2e-4);  // mass beyond the stored letters
    CHECK(g.mean_tau_infinite);            // beta = 1/2 < 1: integral diverges
    // equilibrium identity at (0,1): h = lambda (zero pressure, b* = 1)
    CHECK(g.entropy == doctest::Approx(g.lyapunov).epsilon(1e-9));
}

TEST_CASE("finiteness domain") {
    System lue = make_lueroth(2);
    System gau = make_gauss(2);
    CHECK(finiteness_check(gau, {0, 0.1, 0}).verdict == Finiteness::Verdict::Finite);
    CHECK(finiteness_check(lue, {0, -0.01, 1}).verdict == Finiteness::Verdict::Infinite);
    CHECK(finiteness_check(lue, {0, 0, 0.5}).verdict == Finiteness::Verdict::Infinite);
    CHECK(finiteness_check(lue, {0, 0, 1.0}).verdict == Finiteness::Verdict::Finite);
    // the q=0 transition for lueroth sits at b = 1/2 (weights (n(n+1))^{-b})
    CHECK(finiteness_check(lue, {0, 0, 0.45}).verdict == Finiteness::Verdict::Infinite);
    CHECK(finiteness_check(lue, {0, 0, 0.62}).verdict == Finiteness::Verdict::Finite);
    // divergent evaluation throws
    CHECK_THROWS_AS(compute_moments(lue, {0, 0, 0.4}), DomainError);
    CHECK_THROWS_AS(compute_moments(lue, {0, -0.1, 1.0}), DomainError);
    // linear_exp ratio test
    System le = make_linear_exp(0.5);
    CHECK(finiteness_check(le, {0, 0, 1.0}).verdict == Finiteness::Verdict::Finite);
    CHECK(finiteness_check(le, {0, 0, 0.2}).verdict == Finiteness::Verdict::Infinite);
}

TEST_CASE("gradient agrees with central finite differences") {
    for (const System& s : {make_lueroth(2), make_linear_poly(2, 1),
                            make_linear_count(2.2, 1.0, 0.7), make_linear_exp(0.5),
                            make_mp_induced(2.0)}) {
        INFO(s.desc.name);
        const Potential pot{0, 0.05, 0.9};
        auto [dpq, dpb] = pressure_gradient(s, pot);
        const double hq = 1e-6 * std::max(1.0, std::fabs(pot.q));
        const double hb = 1e-6;
        auto p = [&](double q, double b) {
            return compute_moments(s, {0, q, b}).pressure;
        };
        const double fd_q = (p(pot.q + hq, pot.b) - p(pot.q - hq, pot.b)) / (2 * hq);
        const double fd_b = (p(pot.q, pot.b + hb) - p(pot.q, pot.b - hb)) / (2 * hb);
        CHECK(std::fabs(fd_q - dpq) / std::fabs(dpq) < 1e-5);
        CHECK(std::fabs(fd_b - dpb) / std::fabs(dpb) < 1e-5);
    }
}

TEST_CASE("pressure is convex in q and in b") {
    System s = make_lueroth(2);
    // grid in b at q = 0.1
    std::vector<double> pb;
    for (int i = 0; i <= 20; ++i) pb.push_back(compute_moments(s, {0, 0.1, 0.7 + 0.03 * i}).pressure);
    for (size_t i = 1; i + 1 < pb.size(); ++i)
        CHECK(pb[i + 1] - 2 * pb[i] + pb[i - 1] >= -1e-9);
    // grid in q at b = 0.95
    std::vector<double> pq;
    for (int i = 0; i <= 20; ++i)
        pq.push_back(compute_moments(s, {0, 0.01 + 0.01 * i, 0.95}).pressure);
    for (size_t i = 1; i + 1 < pq.size(); ++i)
        CHECK(pq[i + 1] - 2 * pq[i] + pq[i - 1] >= -1e-9);
}

TEST_CASE("equilibrium identity h + int psi = P") {
    System s = make_lueroth(2);
    const Potential pot{0, 0.2, 0.8};
    GibbsMeasure g = gibbs_weights(s, pot, 50000);
    const double int_psi = -pot.q * g.mean_tau - pot.b * g.lyapunov;
    CHECK(std::fabs(g.entropy + int_psi - g.pressure.value) < 1e-10);
    CHECK(g.entropy > 0);
    CHECK(g.lyapunov > std::log(s.expansion_constant) - 1e-9);
}

TEST_CASE("pressure lower bounds are nondecreasing in truncation") {
    System s = make_lueroth(2);
    double prev = -1e300;
    for (std::uint64_t N : {300, 1000, 3000, 10000}) {
        EngineOptions opt;
        opt.n_direct = N;
        Moments mo = compute_moments(s, {0, 0.01, 0.9}, opt);
        CHECK(mo.estimate.lower >= prev - 1e-12);  // up to quadrature jitter
        prev = mo.estimate.lower;
    }
}

TEST_CASE("tolerance error carries the achieved sandwich") {
    System s = make_lueroth(2);
    EngineOptions opt;
    opt.n_direct = 64;
    opt.truncation_cap = 64;
    bool threw = false;
    try {
        pressure_locally_constant(s, {0, 0, 1}, 1e-16, opt);
    } catch (const ToleranceError& e) {
        threw = true;
        CHECK(e.achieved_lower <= 0.0);
        CHECK(e.achieved_upper >= 0.0);
        CHECK(e.achieved_upper - e.achieved_lower > 1e-16);
    }
    CHECK(threw);
}

TEST_CASE("moran two-branch dimension against the golden-ratio closed form") {
    System moran = make_finite_linear({0.5, 0.25}, {1, 2});
    BowenResult b = bowen_dimension(moran, 1e-12);
    const double phi = (1 + std::sqrt(5.0)) / 2;
    const double expected = std::log(phi) / std::log(2.0);  // Moran: u + u^2 = 1, u = 2^{-t}
    CHECK(std::fabs(b.value - expected) < 1e-10);
    CHECK(b.residual < 1e-12);
}

TEST_CASE("bowen dimension of full builtins is 1") {
    for (const System& s : {make_lueroth(2), make_linear_poly(2, 1), make_mp_induced(2.0)}) {
        INFO(s.desc.name);
        BowenResult b = bowen_dimension(s, 1e-11);
        CHECK(std::fabs(b.value - 1.0) < 1e-8);
        CHECK(b.lower <= 1.0 + 1e-10);
        CHECK(b.upper >= 1.0 - 1e-8);
    }
}

TEST_CASE("truncated lueroth dimension increases with the alphabet") {
    double prev = 0;
    for (std::uint64_t N : {10, 50, 200, 1000}) {
        System t = truncate_system(make_lueroth(2), N);
        BowenResult b = bowen_dimension(t, 1e-12);
        CHECK(b.value > prev);
        CHECK(b.value < 1.0);
        prev = b.value;
    }
    CHECK(prev > 0.99);  // -> b* = 1
}

TEST_CASE("mean tau flags divergence on the q=0 ray") {
    System s = make_linear_poly(2, 1);
    GibbsMeasure g = gibbs_weights(s, {0, 0, 1.0}, 1000);
    CHECK(g.mean_tau_infinite);
    CHECK(std::isinf(g.mean_tau));
    GibbsMeasure g2 = gibbs_weights(s, {0, 0.01, 1.0}, 1000);
    CHECK(!g2.mean_tau_infinite);
    CHECK(std::isfinite(g2.mean_tau));
}
