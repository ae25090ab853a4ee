#include "birkhoff/gauss_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "birkhoff/errors.hpp"
#include "birkhoff/numerics.hpp"

namespace birkhoff {

namespace {
std::map<int, std::vector<double>> g_node_cache;
std::mutex g_node_mutex;
}  // namespace

ChebFun::ChebFun(int degree) : values(degree + 1, 0.0) {}

const std::vector<double>& ChebFun::nodes(int degree) {
    std::lock_guard<std::mutex> lock(g_node_mutex);
    auto& v = g_node_cache[degree];
    if (v.empty()) {
        v.resize(degree + 1);
        for (int j = 0; j <= degree; ++j)
            v[j] = 0.5 * (1 + std::cos(M_PI * j / degree));  // v[0] = 1, v[degree] = 0
    }
    return v;
}

double ChebFun::eval(double x) const {
    const int M = degree();
    const auto& xs = nodes(M);
    double num = 0, den = 0;
    for (int j = 0; j <= M; ++j) {
        const double dx = x - xs[j];
        if (std::fabs(dx) < 1e-15) return values[j];
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == M) w *= 0.5;
        const double t = w / dx;
        num += t * values[j];
        den += t;
    }
    return num / den;
}

double ChebFun::min_value() const {
    double m = values[0];
    for (double v : values) m = std::min(m, v);
    for (int i = 0; i <= 512; ++i) m = std::min(m, eval(i / 512.0));
    return m;
}

double ChebFun::max_value() const {
    double m = values[0];
    for (double v : values) m = std::max(m, v);
    for (int i = 0; i <= 512; ++i) m = std::max(m, eval(i / 512.0));
    return m;
}

double ChebFun::max_abs_slope() const {
    double m = 0, prev = eval(0.0);
    const int G = 2048;
    for (int i = 1; i <= G; ++i) {
        const double cur = eval((double)i / G);
        m = std::max(m, std::fabs(cur - prev) * G);
        prev = cur;
    }
    return 1.5 * m;  // sampled bound with slack
}

double GaussRuelleOp::row_sum(double x, const ChebFun& f) const {
    return row_sum_weighted(x, f, 0, 0);
}

double GaussRuelleOp::row_sum_weighted(double x, const ChebFun& f, int tau_pow,
                                       int logd_pow) const {
    CompensatedSum<long double> acc;
    auto term_at = [&](double a) -> long double {
        const double qa = q * std::pow(a, r);
        if (qa > 700) return 0.0L;
        const double logd = 2 * std::log(a + x);
        double fac = f.eval(1.0 / (a + x));
        for (int i = 0; i < tau_pow; ++i) fac *= std::pow(a, r);
        for (int i = 0; i < logd_pow; ++i) fac *= logd;
        return expl((long double)(-qa - b * logd)) * (long double)fac;
    };
    auto smooth_tail_from = [&](double a0) -> long double {
        auto ts = tail_sum([&](double t) { return term_at(t); }, a0, 1e-13);
        if (ts.divergent) throw DomainError("gauss operator: letter sum diverges");
        return ts.value;
    };

    const std::uint64_t direct_cut = std::min<std::uint64_t>(truncation, 800);
    bool dead = false;
    for (std::uint64_t a = 1; a <= direct_cut; ++a) {
        acc.add(term_at((double)a));
        if (q > 0 && q * std::pow((double)a, r) > 700) {
            dead = true;
            break;
        }
    }
    if (dead) return (double)acc.value();

    if (truncation > direct_cut) {
        if (truncation < direct_cut + 64) {
            for (std::uint64_t a = direct_cut + 1; a <= truncation; ++a)
                acc.add(term_at((double)a));
            if (include_tail) acc.add(smooth_tail_from((double)truncation + 1));
        } else if (include_tail) {
            acc.add(smooth_tail_from((double)direct_cut + 1));
        } else {
            acc.add(smooth_tail_from((double)direct_cut + 1) -
                    smooth_tail_from((double)truncation + 1));
        }
    } else if (include_tail) {
        acc.add(smooth_tail_from((double)truncation + 1));
    }
    return (double)acc.value();
}

double GaussRuelleOp::tail_sup_bound() const {
    auto f = [&](double t) -> long double {
        const double qa = q * std::pow(t, r);
        if (qa > 700) return 0.0L;
        return expl((long double)(-qa - 2 * b * std::log(t)));
    };
    auto ts = tail_sum(f, (double)(truncation + 1), 1e-12);
    if (ts.divergent) throw DomainError("gauss operator: tail bound diverges");
    return (double)std::max<long double>(ts.bound_hi, ts.value);
}

GaussEigen gauss_eigen(const GaussRuelleOp& op, int power_iters, int cw_grid) {
    const int M = 32;
    const auto& xs = ChebFun::nodes(M);
    GaussEigen out;
    out.h = ChebFun(M);
    for (double& v : out.h.values) v = 1.0;

    double lam = 1.0;
    for (int it = 0; it < power_iters; ++it) {
        ChebFun next(M);
        for (int j = 0; j <= M; ++j) next.values[j] = op.row_sum(xs[j], out.h);
        const double nl = next.values[M / 2] / out.h.values[M / 2];
        double scale = next.values[M / 2];
        for (double& v : next.values) v /= scale;
        const double drift = std::fabs(nl - lam);
        out.h = next;
        lam = nl;
        out.iterations = it + 1;
        if (it > 4 && drift <= 1e-15 * std::fabs(lam)) break;
    }
    if (!(out.h.min_value() > 0))
        throw ConvergenceError("gauss operator: power iteration left the positive cone");

    // Collatz-Wielandt: for positive f, min (Lf/f) <= rho <= max (Lf/f).
    // The truncated operator gives the lower quotient; the alphabet tail is
    // bounded above by T * max f and folded into the upper.
    GaussRuelleOp trunc_op = op;
    trunc_op.include_tail = false;
    double T;
    try {
        T = op.tail_sup_bound();
    } catch (const DomainError&) {
        T = std::numeric_limits<double>::infinity();  // full-alphabet sum diverges here
    }
    const double fmax = out.h.max_value(), fmin = out.h.min_value();
    double qmin = 1e300, qmax = -1e300;
    for (int i = 0; i <= cw_grid; ++i) {
        const double x = (double)i / cw_grid;
        const double fx = out.h.eval(x);
        const double Lx = trunc_op.row_sum(x, out.h);
        qmin = std::min(qmin, Lx / fx);
        qmax = std::max(qmax, (Lx + T * fmax) / fx);
    }
    // Lipschitz widening between grid points: |d log (Lf/f) / dx| <= 2b + 2 |f'|/min f.
    const double clip = (2 * std::max(op.b, 1.0) + 2 * out.h.max_abs_slope() / fmin) /
                        (2.0 * cw_grid);
    out.lower = std::log(qmin) - clip;
    out.upper = std::log(qmax) + clip;
    out.log_lambda = std::log(lam);
    if (op.include_tail) {
        // midpoint from the tail-inclusive iteration is already inside; keep it
        out.log_lambda = std::min(std::max(out.log_lambda, out.lower), out.upper);
    }
    return out;
}

namespace {

double system_r(const System& sys) {
    for (const auto& [k, v] : sys.desc.params)
        if (k == "r") return v;
    return 2;
}

// L collapsed onto the Chebyshev basis: (Lf)(x_j) = sum_i mat[j][i] f_i plus a
// quadratic end-point correction for the letter tail (u = 1/(a+x) -> 0 there).
// Weighted variants carry per-letter factors tau^s logd^t for seed building.
struct CompiledGaussOp {
    static constexpr int kWeights = 6;  // 1, tau, logd, tau^2, tau*logd, logd^2
    int M = 32;
    std::uint64_t a0 = 800;
    bool build_skip_tau = false;  // q = 0: tau-weighted letter tails diverge
    std::array<std::vector<double>, kWeights> mat;      // (M+1) x (M+1)
    std::array<std::array<std::vector<double>, 3>, kWeights> tail;  // [w][k][j]

    static void weight_factors(double tau, double logd, double* f) {
        f[0] = 1;
        f[1] = tau;
        f[2] = logd;
        f[3] = tau * tau;
        f[4] = tau * logd;
        f[5] = logd * logd;
    }

    void build(const GaussRuelleOp& op) {
        const auto& xs = ChebFun::nodes(M);
        for (auto& m : mat) m.assign((M + 1) * (M + 1), 0.0);
        for (auto& t : tail)
            for (auto& v : t) v.assign(M + 1, 0.0);
        std::vector<double> card(M + 1);
        double fac[kWeights];
        for (int j = 0; j <= M; ++j) {
            const double x = xs[j];
            for (std::uint64_t a = 1; a <= a0; ++a) {
                const double qa = op.q * std::pow((double)a, op.r);
                if (qa > 700) break;
                const double logd = 2 * std::log(a + x);
                const double w = std::exp(-qa - op.b * logd);
                const double u = 1.0 / (a + x);
                // barycentric cardinal values at u
                double den = 0;
                bool hit = false;
                for (int i = 0; i <= M; ++i) {
                    const double dx = u - xs[i];
                    if (std::fabs(dx) < 1e-15) {
                        std::fill(card.begin(), card.end(), 0.0);
                        card[i] = 1;
                        hit = true;
                        break;
                    }
                    double bw = (i % 2 == 0) ? 1.0 : -1.0;
                    if (i == 0 || i == M) bw *= 0.5;
                    card[i] = bw / dx;
                    den += card[i];
                }
                if (!hit)
                    for (int i = 0; i <= M; ++i) card[i] /= den;
                weight_factors(std::pow((double)a, op.r), logd, fac);
                for (int wi = 0; wi < kWeights; ++wi) {
                    double* row = &mat[wi][j * (M + 1)];
                    const double ww = w * fac[wi];
                    for (int i = 0; i <= M; ++i) row[i] += ww * card[i];
                }
            }
            // letter tail: f(u) ~ f(0) + u f'(0) + u^2 f''(0)/2
            for (int wi = 0; wi < kWeights; ++wi) {
                if (build_skip_tau && (wi == 1 || wi == 3 || wi == 4)) continue;
                for (int k = 0; k < 3; ++k) {
                    auto f = [&](double t) -> long double {
                        const double qa = op.q * std::pow(t, op.r);
                        if (qa > 700) return 0.0L;
                        const double logd = 2 * std::log(t + x);
                        double fc[kWeights];
                        weight_factors(std::pow(t, op.r), logd, fc);
                        return expl((long double)(-qa - op.b * logd)) *
                               (long double)(fc[wi] * std::pow(1.0 / (t + x), k));
                    };
                    auto ts = tail_sum(f, (double)(a0 + 1), 1e-11);
                    if (ts.divergent)
                        throw DomainError("gauss operator: letter sum diverges");
                    tail[wi][k][j] = (double)ts.value;
                }
            }
        }
    }

    ChebFun apply(const ChebFun& f, int wi) const {
        ChebFun out(M);
        const double h = 0.02;
        const double f0 = f.values[M];  // node M is x = 0
        const double fh = f.eval(h), f2h = f.eval(2 * h);
        const double fp0 = (-3 * f0 + 4 * fh - f2h) / (2 * h);
        const double fpp0 = (f0 - 2 * fh + f2h) / (h * h);
        for (int j = 0; j <= M; ++j) {
            const double* row = &mat[wi][j * (M + 1)];
            double s = 0;
            for (int i = 0; i <= M; ++i) s += row[i] * f.values[i];
            s += tail[wi][0][j] * f0 + tail[wi][1][j] * fp0 + tail[wi][2][j] * fpp0 / 2;
            out.values[j] = s;
        }
        return out;
    }
};

GaussRuelleOp make_op(const System& sys, const Potential& pot, std::uint64_t truncation,
                      bool include_tail) {
    GaussRuelleOp op;
    op.r = system_r(sys);
    op.q = pot.q;
    op.b = pot.b;
    op.truncation = truncation ? truncation : 20000;
    op.include_tail = include_tail;
    return op;
}

struct GaussFast {
    CompiledGaussOp C;
    ChebFun h{32};
    double lam = 1;
    bool tau_divergent = false;
    double quot_lo = 0, quot_hi = 0;  // node quotients of the final iterate
};

GaussFast compile_gauss(const GaussRuelleOp& op) {
    GaussFast out;
    if (op.q == 0) {
        // tau-weighted letter tails diverge on this ray; build them as zero
        GaussRuelleOp plain = op;
        out.tau_divergent = true;
        CompiledGaussOp C;
        C.build_skip_tau = true;
        C.build(plain);
        out.C = std::move(C);
    } else {
        out.C.build(op);
    }
    for (double& v : out.h.values) v = 1.0;
    const int mid = out.h.degree() / 2;
    for (int it = 0; it < 200; ++it) {
        ChebFun next = out.C.apply(out.h, 0);
        const double nl = next.values[mid] / out.h.values[mid];
        const double scale = next.values[mid];
        for (double& v : next.values) v /= scale;
        const double drift = std::fabs(nl - out.lam);
        out.h = next;
        out.lam = nl;
        if (it > 4 && drift <= 1e-15 * std::fabs(nl)) break;
    }
    ChebFun lh = out.C.apply(out.h, 0);
    out.quot_lo = 1e300;
    out.quot_hi = -1e300;
    for (int j = 0; j <= out.h.degree(); ++j) {
        const double qt = lh.values[j] / out.h.values[j];
        out.quot_lo = std::min(out.quot_lo, qt);
        out.quot_hi = std::max(out.quot_hi, qt);
    }
    if (!(out.h.min_value() > 0))
        throw ConvergenceError("gauss operator: power iteration left the positive cone");
    return out;
}

// R(seed) ~ nu(seed): iterate the plain operator and read off the h-component.
double nu_functional(const GaussFast& g, ChebFun seed, int iters = 24) {
    const int mid = g.h.degree() / 2;
    for (int it = 0; it < iters; ++it) {
        seed = g.C.apply(seed, 0);
        for (double& v : seed.values) v /= g.lam;
    }
    return seed.values[mid] / g.h.values[mid];
}

}  // namespace

Moments gauss_moments(const System& sys, const Potential& pot, const EngineOptions& opt) {
    if (pot.q < 0) throw DomainError("pressure: q < 0 lies outside the finiteness domain");
    GaussRuelleOp op = make_op(sys, pot, opt.n_direct, true);
    GaussFast g = compile_gauss(op);

    Moments mo;
    mo.z = g.lam;
    mo.pressure = pot.q * pot.alpha + std::log(g.lam);
    const double Rh = nu_functional(g, g.C.apply(g.h, 0));
    if (g.tau_divergent) {
        mo.tau_moment_divergent = true;
        mo.lyapunov = nu_functional(g, g.C.apply(g.h, 2)) / Rh;
        mo.dp_dq = -std::numeric_limits<double>::infinity();
    } else {
        const double Et = nu_functional(g, g.C.apply(g.h, 1)) / Rh;
        const double EL = nu_functional(g, g.C.apply(g.h, 2)) / Rh;
        const double Et2 = nu_functional(g, g.C.apply(g.h, 3)) / Rh;
        const double EtL = nu_functional(g, g.C.apply(g.h, 4)) / Rh;
        const double EL2 = nu_functional(g, g.C.apply(g.h, 5)) / Rh;
        mo.dp_dq = pot.alpha - Et;
        mo.lyapunov = EL;
        mo.var_tau = Et2 - Et * Et;
        mo.cov_tau_logd = EtL - Et * EL;
        mo.var_logd = EL2 - EL * EL;
    }
    mo.estimate.lower = pot.q * pot.alpha + std::log(g.quot_lo);
    mo.estimate.upper = pot.q * pot.alpha + std::log(g.quot_hi);
    mo.estimate.value = mo.pressure;
    mo.estimate.truncation_N = op.truncation;
    mo.estimate.depth_n = 1;
    try {
        mo.estimate.tail_bound = op.tail_sup_bound();
    } catch (const DomainError&) {
        mo.estimate.tail_bound = std::numeric_limits<double>::infinity();
    }
    return mo;
}

BowenResult gauss_bowen_dimension(const System& sys, double tol, int depth,
                                  std::uint64_t truncation) {
    const int iters = std::max(24, 12 * std::max(depth, 1));
    auto bounds_at = [&](double b, bool upper_side) -> double {
        GaussRuelleOp op = make_op(sys, {0, 0, b}, truncation, false);
        GaussEigen eig = gauss_eigen(op, iters, 512);
        return upper_side ? eig.upper : eig.lower;
    };
    auto root_of = [&](bool upper_side) {
        auto f = [&](double b) { return bounds_at(b, upper_side); };
        double lo = 0.5, hi = 1.5;
        double flo = f(lo), fhi = f(hi);
        int guard = 0;
        while (!(flo > 0) && ++guard < 20) {
            lo *= 0.8;
            flo = f(lo);
        }
        while (!(fhi < 0) && ++guard < 40) {
            hi *= 1.3;
            fhi = f(hi);
        }
        return bisect(f, lo, hi, flo, fhi, tol);
    };
    BowenResult out;
    out.lower = root_of(false);
    out.upper = root_of(true);
    out.value = 0.5 * (out.lower + out.upper);
    {
        GaussRuelleOp op = make_op(sys, {0, 0, out.value}, truncation, false);
        GaussEigen eig = gauss_eigen(op, iters, 512);
        out.residual = std::fabs(0.5 * (eig.lower + eig.upper));
    }
    out.truncation_N = truncation;
    out.depth_n = depth;
    return out;
}

GibbsMeasure gauss_gibbs_weights(const System& sys, const Potential& pot, std::uint64_t N,
                                 const EngineOptions& opt) {
    GibbsMeasure g;
    if (pot.q == 0 && std::fabs(pot.b - 1.0) < 1e-12 && sys.has_mu_closed_form) {
        // (0, b*): the equilibrium state is the Gauss measure itself.
        const std::uint64_t keep = std::min<std::uint64_t>(N, 100000);
        CompensatedSum<long double> kept;
        for (std::uint64_t a = 1; a <= keep; ++a) {
            const double w = sys.mu_letter(a);
            g.letter_weights.emplace_back(a, w);
            kept.add((long double)w);
        }
        g.normalization_defect = std::fabs(1.0 - (double)kept.value());
        Moments mo = gauss_moments(sys, pot, opt);
        g.pressure = mo.estimate;
        g.lyapunov = mo.lyapunov;
        g.mean_tau_infinite = true;
        g.mean_tau = std::numeric_limits<double>::infinity();
        g.entropy = g.lyapunov;  // h = b* lambda on the zero-pressure ray
        g.gibbs_constant_estimate = 2.0;  // density 1/((1+x) ln 2) varies by a factor 2
        return g;
    }
    Moments mo = gauss_moments(sys, pot, opt);
    GaussRuelleOp op = make_op(sys, pot, opt.n_direct, true);
    GaussFast fast = compile_gauss(op);
    const double Rh = nu_functional(fast, fast.C.apply(fast.h, 0));
    const std::uint64_t keep = std::min<std::uint64_t>(N, 160);
    const int M = fast.h.degree();
    const auto& xs = ChebFun::nodes(M);
    CompensatedSum<long double> kept;
    const double r = system_r(sys);
    for (std::uint64_t a = 1; a <= keep; ++a) {
        // mu([a]) = nu(h 1_{[a]}) = nu(L(h 1_{[a]})) / lambda, and the single-branch
        // pullback L(h 1_{[a]}) is smooth.
        ChebFun seed(M);
        for (int j = 0; j <= M; ++j) {
            const double x = xs[j];
            seed.values[j] = std::exp(-pot.q * std::pow((double)a, r)) *
                             std::pow(a + x, -2 * pot.b) * fast.h.eval(1.0 / (a + x));
        }
        const double w = nu_functional(fast, seed) / (fast.lam * Rh);
        g.letter_weights.emplace_back(a, w);
        kept.add((long double)w);
    }
    g.normalization_defect = std::fabs(1.0 - (double)kept.value());
    g.pressure = mo.estimate;
    g.lyapunov = mo.lyapunov;
    g.mean_tau_infinite = mo.tau_moment_divergent;
    g.mean_tau = g.mean_tau_infinite ? std::numeric_limits<double>::infinity()
                                     : pot.alpha - mo.dp_dq;
    g.var_tau = mo.var_tau;
    g.cov_tau_logf = mo.cov_tau_logd;
    if (!g.mean_tau_infinite)
        g.entropy = mo.pressure - (pot.q * mo.dp_dq - pot.b * mo.lyapunov);
    g.gibbs_constant_estimate = eig.h.max_value() / eig.h.min_value();
    return g;
}

std::pair<double, double> gauss_pressure_gradient(const System& sys, const Potential& pot,
                                                  const EngineOptions& opt) {
    Moments mo = gauss_moments(sys, pot, opt);
    if (mo.tau_moment_divergent)
        throw DomainError("pressure_gradient: mean of tau diverges at q = 0");
    return {mo.dp_dq - pot.alpha, -mo.lyapunov};
}

}  // namespace birkhoff
