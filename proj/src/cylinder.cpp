#include "birkhoff/cylinder.hpp"

#include <cmath>

#include "birkhoff/errors.hpp"
#include "birkhoff/numerics.hpp"

namespace birkhoff {

namespace {

double system_r(const System& sys) {
    for (const auto& [k, v] : sys.desc.params)
        if (k == "r") return v;
    return 2;
}

}  // namespace

CylinderBounds cylinder_derivative_bounds(const System& sys,
                                          const std::vector<std::uint64_t>& word) {
    if (word.empty()) throw ParamError("cylinder_derivative_bounds: word must be nonempty");
    if (sys.family == Family::Gauss) {
        // Continuants: over the cylinder of (a_1..a_n), S_n log|F'| ranges between
        // 2 log q_n (image endpoint 0) and 2 log (q_n + q_{n-1}) (image endpoint 1).
        double q_prev = 0, q_cur = 1;
        for (std::uint64_t a : word) {
            if (a < 1) throw ParamError("cylinder_derivative_bounds: letters start at 1");
            const double q_next = (double)a * q_cur + q_prev;
            q_prev = q_cur;
            q_cur = q_next;
        }
        return {2 * std::log(q_cur), 2 * std::log(q_cur + q_prev)};
    }
    if (!sys.constant_slope)
        throw ParamError("cylinder_derivative_bounds: no bound model for this system");
    double s = 0;
    for (std::uint64_t a : word) {
        if (sys.finite && a > sys.alphabet_size)
            throw ParamError("cylinder_derivative_bounds: letter beyond alphabet");
        s += sys.term(a).logd;
    }
    return {s, s};
}

PressureEstimate pressure_cylinder_sandwich(const System& sys, const Potential& pot, int depth,
                                            std::uint64_t truncation, std::uint64_t word_cap) {
    if (depth < 1) throw ParamError("pressure_cylinder_sandwich: depth must be >= 1");
    if (truncation < 1) throw ParamError("pressure_cylinder_sandwich: truncation must be >= 1");

    if (sys.constant_slope) {
        // Zero distortion: every depth reproduces the depth-1 sandwich.
        EngineOptions opt;
        opt.n_direct = std::max<std::uint64_t>(truncation, opt.n_direct);
        Moments mo = compute_moments(sys, pot, opt);
        PressureEstimate est = mo.estimate;
        est.depth_n = depth;
        return est;
    }
    if (sys.family != Family::Gauss)
        throw ParamError("pressure_cylinder_sandwich: unsupported analytic system " +
                         sys.desc.name);

    double words = 1;
    for (int d = 0; d < depth; ++d) {
        words *= (double)truncation;
        if (words > (double)word_cap)
            throw CapacityError(
                "pressure_cylinder_sandwich: " + std::to_string(words) +
                " words exceed the cap; reduce depth or truncation");
    }

    const double r = system_r(sys);
    const double q = pot.q, b = pot.b;

    // Depth-1 per-letter sup terms for the alphabet-tail fold.
    CompensatedSum<long double> z1;
    for (std::uint64_t a = 1; a <= truncation; ++a) {
        const double lw = -q * std::pow((double)a, r) - 2 * b * std::log((double)a);
        z1.add(lw < -745 ? 0.0L : expl((long double)lw));
    }
    auto t1 = tail_sum(
        [&](double t) -> long double {
            const double lw = -q * std::pow(t, r) - 2 * b * std::log(t);
            return lw < -745 ? 0.0L : expl((long double)lw);
        },
        (double)truncation + 1, 1e-12);
    const long double tail1 = t1.divergent ? 0.0L : (long double)std::max<long double>(
                                                        t1.bound_hi, t1.value);
    if (t1.divergent)
        throw DomainError("pressure_cylinder_sandwich: potential outside finiteness domain");

    // Recursive word enumeration carrying continuants and the tau sum.
    CompensatedSum<long double> z_lo, z_hi;
    std::function<void(int, double, double, double)> walk = [&](int level, double q_prev,
                                                                double q_cur, double tau_acc) {
        if (level == depth) {
            const long double e_inf =
                expl((long double)(-q * tau_acc - 2 * b * std::log(q_cur + q_prev)));
            const long double e_sup = expl((long double)(-q * tau_acc - 2 * b * std::log(q_cur)));
            z_lo.add(e_inf);
            z_hi.add(e_sup);
            return;
        }
        for (std::uint64_t a = 1; a <= truncation; ++a) {
            const double tau_next = tau_acc + std::pow((double)a, r);
            if (q > 0 && q * tau_next > 760) break;
            walk(level + 1, q_cur, (double)a * q_cur + q_prev, tau_next);
        }
    };
    walk(0, 0.0, 1.0, 0.0);

    // Missing words (some letter > truncation): bounded by (Z1 + T1)^n - Z1^n.
    const long double z1v = z1.value();
    long double fold = powl(z1v + tail1, depth) - powl(z1v, depth);

    PressureEstimate est;
    est.depth_n = depth;
    est.truncation_N = truncation;
    est.tail_bound = (double)fold;
    est.lower = pot.q * pot.alpha + (double)(logl(z_lo.value()) / depth);
    est.upper = pot.q * pot.alpha + (double)(logl(z_hi.value() + fold) / depth);
    est.value = 0.5 * (est.lower + est.upper);
    return est;
}

std::vector<PressureEstimate> cylinder_sandwich_sequence(const System& sys, const Potential& pot,
                                                         int max_depth,
                                                         std::uint64_t truncation) {
    std::vector<PressureEstimate> out;
    double best_lo = -1e300, best_hi = 1e300;
    for (int d = 1; d <= max_depth; ++d) {
        PressureEstimate e = pressure_cylinder_sandwich(sys, pot, d, truncation);
        best_lo = std::max(best_lo, e.lower);
        best_hi = std::min(best_hi, e.upper);
        e.lower = best_lo;
        e.upper = best_hi;
        e.value = 0.5 * (best_lo + best_hi);
        out.push_back(e);
    }
    return out;
}

}  // namespace birkhoff
