#pragma once

// Test-only oracles, independent of the library's solver paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include "birkhoff/systems.hpp"

namespace oracles {

// Direct depth-1 pressure of a finite constant-slope system: plain letter
// loop, no tail machinery.
inline double direct_p(const birkhoff::System& sys, double alpha, double q, double b) {
    long double z = 0;
    for (std::uint64_t a = 1; a <= sys.alphabet_size; ++a) {
        const birkhoff::Term t = sys.term(a);
        z += expl((long double)(-q * t.tau - b * t.logd)) * (long double)t.count;
    }
    return (double)(q * alpha + std::log((double)z));
}

// Brute-force solution of { p = 0, min over q }: for each b, minimise p over a
// q-grid refined by golden section; then bisect b on the minimal value.
// Mirrors a (q,b) grid search over [0,2]^2 with local refinement.
struct GridSolution {
    double q = 0, b = 0;
};

inline GridSolution grid_search_point(const birkhoff::System& sys, double alpha) {
    auto min_q = [&](double b, double& qmin) {
        double best = 1e300;
        qmin = 1e-4;
        for (int i = 0; i <= 2000; ++i) {
            const double q = 1e-8 * std::pow(2.0e8, i / 2000.0);  // up to 2
            const double v = direct_p(sys, alpha, q, b);
            if (v < best) {
                best = v;
                qmin = q;
            }
        }
        // golden-section refinement around the grid minimum
        double lo = qmin / 1.02, hi = qmin * 1.02;
        const double invphi = (std::sqrt(5.0) - 1) / 2;
        double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
        double fc = direct_p(sys, alpha, c, b), fd = direct_p(sys, alpha, d, b);
        while (hi - lo > 1e-13 * qmin) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - invphi * (hi - lo);
                fc = direct_p(sys, alpha, c, b);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + invphi * (hi - lo);
                fd = direct_p(sys, alpha, d, b);
            }
        }
        qmin = 0.5 * (lo + hi);
        return direct_p(sys, alpha, qmin, b);
    };
    double blo = 1e-3, bhi = 2.0, qm;
    // min_q p is decreasing in b; bisect its sign
    for (int it = 0; it < 60; ++it) {
        const double bm = 0.5 * (blo + bhi);
        (min_q(bm, qm) > 0 ? blo : bhi) = bm;
    }
    GridSolution out;
    out.b = 0.5 * (blo + bhi);
    min_q(out.b, out.q);
    return out;
}

}  // namespace oracles
