#include "birkhoff/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/errors.hpp"
#include "birkhoff/gauss_operator.hpp"
#include "birkhoff/numerics.hpp"

namespace birkhoff {

namespace {

Moments moments_for(const System& sys, const Potential& pot, const EngineOptions& opt) {
    return sys.family == Family::Gauss ? gauss_moments(sys, pot, opt)
                                       : compute_moments(sys, pot, opt);
}

}  // namespace

const SpectrumPoint* SpectrumCurve::at_alpha(double alpha) const {
    for (const auto& p : points)
        if (std::fabs(p.alpha - alpha) <= 1e-12 * std::max(1.0, std::fabs(alpha))) return &p;
    return nullptr;
}

double alpha_min(const System& sys) { return sys.alpha_min; }

SpectrumPoint solve_point(const System& sys, double alpha, double q0, double b0,
                          const SolveOptions& opt) {
    if (!(alpha > sys.alpha_min))
        throw ParamError("solve_point: alpha must exceed the minimal Birkhoff average " +
                         std::to_string(sys.alpha_min));
    if (!(q0 > 0)) throw ParamError("solve_point: initial q must be positive");

    EngineOptions eng = opt.engine;
    double q = q0, b = b0;
    const double tol = opt.tolerance;

    auto eval = [&](double qq, double bb) -> Moments {
        Potential pot{alpha, qq, bb};
        for (;;) {
            Moments mo = moments_for(sys, pot, eng);
            if (sys.family == Family::Gauss) return mo;  // operator path: fixed resolution
            if (mo.estimate.width() <= 0.01 * tol || sys.finite ||
                eng.n_direct >= eng.truncation_cap)
                return mo;
            eng.n_direct = std::min(eng.truncation_cap, eng.n_direct * 4);
        }
    };

    Moments mo = eval(q, b);
    double merit_scale = 1.0 / (1.0 + std::sqrt(std::max(mo.var_tau, 0.0)));
    auto merit = [&](const Moments& m) {
        return std::fabs(m.pressure) + std::fabs(m.dp_dq) * merit_scale;
    };

    SpectrumPoint out;
    int it = 0;
    for (; it < opt.max_iters; ++it) {
        if (mo.var_tau < 1e-12)
            throw DomainError(
                "solve_point: tau is essentially constant under the current Gibbs measure "
                "(Var < 1e-12); the spectrum degenerates to a point");
        if (std::fabs(mo.pressure) <= tol && std::fabs(mo.dp_dq) <= tol) break;

        // G = (p, dp/dq), J = [[dp/dq, dp/db], [d2p/dq2, d2p/dbdq]]
        const double p = mo.pressure, g = mo.dp_dq;
        const double lam = mo.lyapunov, V = mo.var_tau, C = mo.cov_tau_logd;
        const double det = g * C + lam * V;
        if (det == 0) throw ConvergenceError("solve_point: singular Newton system");
        double dq = (-p * C - lam * g) / det;
        double db = (p * V - g * g) / det;
        // keep steps inside the finiteness domain and a trust region in b
        const double bcap = 0.25 * std::max(1.0, std::fabs(b));
        if (std::fabs(db) > bcap) {
            const double sc = bcap / std::fabs(db);
            db *= sc;
            dq *= sc;
        }
        double t = 1.0;
        const double m0 = merit(mo);
        Moments cand;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            const double qn = q + t * dq, bn = b + t * db;
            if (qn <= 0) {
                t *= 0.5;
                continue;
            }
            try {
                cand = eval(qn, bn);
            } catch (const DomainError&) {
                t *= 0.5;
                continue;
            }
            if (merit(cand) < m0 || back >= 12) {
                q = qn;
                b = bn;
                mo = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError("solve_point: backtracking stalled at alpha=" +
                                   std::to_string(alpha) + " (residual p=" +
                                   std::to_string(mo.pressure) + ")");
        merit_scale = 1.0 / (1.0 + std::sqrt(std::max(mo.var_tau, 0.0)));
    }
    if (std::fabs(mo.pressure) > tol || std::fabs(mo.dp_dq) > tol)
        throw ConvergenceError("solve_point: iteration cap exceeded at alpha=" +
                               std::to_string(alpha) + " (|p|=" +
                               std::to_string(std::fabs(mo.pressure)) + ", |dp/dq|=" +
                               std::to_string(std::fabs(mo.dp_dq)) + ")");

    out.alpha = alpha;
    out.q = q;
    out.b = b;
    out.lyapunov = mo.lyapunov;
    out.mean_tau = alpha - mo.dp_dq;
    out.var_tau = mo.var_tau;
    // h = P(psi) - int psi dmu with int psi dmu = q*(dp/dq) - b*lyapunov
    out.entropy = mo.pressure - (q * mo.dp_dq - b * mo.lyapunov);
    out.residual_p = std::fabs(mo.pressure);
    out.residual_dp = std::fabs(mo.dp_dq);
    out.newton_iters = it;
    out.truncation_N = mo.estimate.truncation_N;
    return out;
}

namespace {

// Coarse log-scan for the first point: dp/dq = alpha - E[tau] is increasing in
// q, so bisect its sign change.
double initial_q(const System& sys, double alpha, double b0, const EngineOptions& eng) {
    auto g_at = [&](double q) -> double {
        try {
            Moments mo = moments_for(sys, {alpha, q, b0}, eng);
            if (mo.tau_moment_divergent) return -1e300;
            return mo.dp_dq;
        } catch (const DomainError&) {
            return -1e300;  // treat as E[tau] = +inf
        }
    };
    double lo = 1e-13, hi = 50;
    if (g_at(hi) < 0) return hi;
    for (int it = 0; it < 80; ++it) {
        const double mid = std::sqrt(lo * hi);
        (g_at(mid) < 0 ? lo : hi) = mid;
        if (hi / lo < 1.05) break;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

SpectrumCurve solve_curve(const System& sys, const std::vector<double>& grid,
                          const SolveOptions& opt) {
    if (grid.size() < 1) throw ParamError("solve_curve: empty grid");
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw ParamError("solve_curve: alpha grid must be strictly increasing");
    if (!(grid.front() > sys.alpha_min))
        throw ParamError("solve_curve: grid touches the minimal Birkhoff average " +
                         std::to_string(sys.alpha_min));

    SpectrumCurve curve;
    curve.grid = grid;
    {
        BowenResult bs = bowen_dimension(sys, 1e-11);
        curve.b_star = bs.value;
    }
    const double beta = sys.tail_model.beta > 0 ? sys.tail_model.beta : 0.5;

    double q_prev = 0, b_prev = 0, a_prev = 0, lam_prev = 1;
    double q_pprev = 0, a_pprev = 0;
    bool have_prev = false, have_pprev = false;

    for (double alpha : grid) {
        double q0, b0;
        if (!have_prev) {
            b0 = 0.9 * curve.b_star;
            q0 = initial_q(sys, alpha, b0, opt.engine);
        } else {
            // tangent predictor b' = q/lambda; q extrapolated on log-log scale
            b0 = std::min(b_prev + (q_prev / lam_prev) * (alpha - a_prev),
                          curve.b_star * (1 - 1e-12));
            if (have_pprev && q_pprev > 0) {
                const double slope = std::log(q_prev / q_pprev) / std::log(a_prev / a_pprev);
                q0 = q_prev * std::pow(alpha / a_prev, slope);
            } else {
                q0 = q_prev * std::pow(alpha / a_prev, -1.0 / (1.0 - beta));
            }
            q0 = std::max(q0, 1e-300);
        }
        try {
            SpectrumPoint pt = solve_point(sys, alpha, q0, b0, opt);
            curve.points.push_back(pt);
            q_pprev = q_prev;
            a_pprev = a_prev;
            have_pprev = have_prev;
            q_prev = pt.q;
            b_prev = pt.b;
            a_prev = pt.alpha;
            lam_prev = pt.lyapunov;
            have_prev = true;
        } catch (const Error& e) {
            curve.failures.emplace_back(alpha, e.what());
        }
    }
    return curve;
}

double check_derivative_identity(const SpectrumCurve& curve) {
    const auto& P = curve.points;
    if (P.size() < 3)
        throw ParamError("check_derivative_identity: need at least 3 consecutive points");
    double worst = 0;
    int used = 0;
    for (size_t i = 1; i + 1 < P.size(); ++i) {
        const double hp = P[i + 1].alpha - P[i].alpha;
        const double hm = P[i].alpha - P[i - 1].alpha;
        if (!(hp > 0) || !(hm > 0)) continue;
        // second-order three-point derivative on a nonuniform grid
        const double d = (hm * hm * P[i + 1].b + (hp * hp - hm * hm) * P[i].b -
                          hp * hp * P[i - 1].b) /
                         (hp * hm * (hp + hm));
        const double formula = P[i].q / P[i].lyapunov;
        if (formula == 0) continue;
        worst = std::max(worst, std::fabs(d - formula) / std::fabs(formula));
        ++used;
    }
    if (used == 0)
        throw ParamError("check_derivative_identity: no interior points with both neighbours");
    return worst;
}

QScan q_scan(const System& sys, double alpha, double b_alpha, double q_lo, double q_hi,
             int samples, const EngineOptions& opt) {
    if (!(q_lo > 0 && q_hi > q_lo) || samples < 3)
        throw ParamError("q_scan: need 0 < q_lo < q_hi and >= 3 samples");
    QScan out;
    out.min_value = 1e300;
    out.most_negative = 0;
    const double step = std::log(q_hi / q_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double q = q_lo * std::exp(step * i);
        Moments mo = moments_for(sys, {alpha, q, b_alpha}, opt);
        if (mo.pressure < out.min_value) {
            out.min_value = mo.pressure;
            out.argmin_q = q;
        }
        out.most_negative = std::min(out.most_negative, mo.pressure);
    }
    return out;
}

}  // namespace birkhoff
