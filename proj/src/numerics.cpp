#include "birkhoff/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "birkhoff/errors.hpp"

namespace birkhoff {

namespace {
int g_workers = 1;
constexpr std::uint64_t kChunk = 16384;
}  // namespace

void set_worker_count(int n) { g_workers = std::max(1, n); }
int worker_count() { return g_workers; }

void deterministic_sum_multi(std::uint64_t begin, std::uint64_t end, int nslots,
                             const std::function<void(std::uint64_t, long double*)>& f,
                             long double* out) {
    const std::uint64_t total = end > begin ? end - begin : 0;
    const std::uint64_t nchunks = (total + kChunk - 1) / kChunk;
    std::vector<std::vector<CompensatedSum<long double>>> partial(
        nchunks, std::vector<CompensatedSum<long double>>(nslots));

    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t lo = begin + c * kChunk;
        const std::uint64_t hi = std::min(end, lo + kChunk);
        std::vector<long double> terms(nslots);
        auto& acc = partial[c];
        for (std::uint64_t i = lo; i < hi; ++i) {
            std::fill(terms.begin(), terms.end(), 0.0L);
            f(i, terms.data());
            for (int s = 0; s < nslots; ++s) acc[s].add(terms[s]);
        }
    };

    const int workers = std::min<std::uint64_t>(g_workers, std::max<std::uint64_t>(nchunks, 1));
    if (workers <= 1 || nchunks <= 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint64_t c = next.fetch_add(1);
                    if (c >= nchunks) return;
                    run_chunk(c);
                }
            });
        for (auto& t : pool) t.join();
    }

    // Combine in chunk order: independent of worker count.
    std::vector<CompensatedSum<long double>> acc(nslots);
    for (std::uint64_t c = 0; c < nchunks; ++c)
        for (int s = 0; s < nslots; ++s) acc[s].add(partial[c][s]);
    for (int s = 0; s < nslots; ++s) out[s] = acc[s].value();
}

long double deterministic_sum(std::uint64_t begin, std::uint64_t end,
                              const std::function<long double(std::uint64_t)>& f) {
    long double out = 0;
    deterministic_sum_multi(
        begin, end, 1, [&](std::uint64_t i, long double* t) { t[0] = f(i); }, &out);
    return out;
}

// --- quadrature ---------------------------------------------------------------

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1] (QUADPACK dqk15).
const double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.0};
const double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace

QuadratureResult integrate_gk(const std::function<long double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol) {
    QuadratureResult out;
    if (!(b > a)) return out;

    struct Seg {
        double a, b;
        long double val, err;
    };

    auto eval_seg = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        long double rk = 0, rg = 0;
        for (int j = 0; j < 8; ++j) {
            const double dx = h * kXgk[j];
            long double fsum;
            if (j == 7) {
                fsum = f(c);
                out.evaluations += 1;
            } else {
                fsum = f(c - dx) + f(c + dx);
                out.evaluations += 2;
            }
            rk += kWgk[j] * fsum;
            if (j % 2 == 1) rg += kWg[j / 2] * fsum;
        }
        Seg s;
        s.a = lo;
        s.b = hi;
        s.val = rk * h;
        long double diff = std::fabs((double)(rk - rg)) * h;
        s.err = diff;
        return s;
    };

    Seg whole = eval_seg(a, b);
    const double scale = std::fabs((double)whole.val) + 1e-300;
    std::vector<Seg> stack{whole};
    std::vector<Seg> done;
    int splits = 0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double budget = std::max(abs_tol, rel_tol * scale) *
                              std::max((s.b - s.a) / (b - a), 1e-6);
        // |K - G| floors near roundoff relative to the segment mass; accept there.
        const long double floor_err = 3e-17L * fabsl(s.val) + 1e-300L;
        if (s.err <= budget || s.err <= floor_err || (s.b - s.a) < 1e-13 * (b - a) ||
            splits > 4000) {
            done.push_back(s);
        } else {
            ++splits;
            const double m = 0.5 * (s.a + s.b);
            stack.push_back(eval_seg(s.a, m));
            stack.push_back(eval_seg(m, s.b));
        }
    }
    std::sort(done.begin(), done.end(), [](const Seg& l, const Seg& r) { return l.a < r.a; });
    CompensatedSum<long double> v, e;
    for (const Seg& s : done) {
        v.add(s.val);
        e.add(s.err);
    }
    out.value = v.value();
    out.error = e.value();
    return out;
}

TailIntegral integrate_tail(const std::function<long double(double)>& f, double x0,
                            double rel_tol) {
    TailIntegral out;
    if (!(x0 > 0)) throw ParamError("integrate_tail: x0 must be positive");

    auto g = [&](double u) -> long double {  // substitution x = e^u
        const double x = std::exp(u);
        return f(x) * (long double)x;
    };
    // Local power exponent p(x) = x f'(x)/f(x) = d log f / d log x by central FD in u.
    auto local_exponent = [&](double x) -> double {
        const double h = 0.05;
        const long double fp = f(x * std::exp(h)), fm = f(x * std::exp(-h)), fc = f(x);
        if (!(fc > 0) || !(fp > 0) || !(fm > 0)) return -std::numeric_limits<double>::infinity();
        return (double)((std::log((double)fp) - std::log((double)fm)) / (2 * h));
    };

    const double u0 = std::log(x0);
    double u_hi = u0;
    CompensatedSum<long double> total;
    long double err = 0;
    for (int block = 0; block < 40; ++block) {
        const double u_next = u_hi + 4.0;
        auto q = integrate_gk(g, u_hi, u_next, rel_tol, 0);
        total.add(q.value);
        err += q.error;
        u_hi = u_next;
        const double x_hi = std::exp(u_hi);
        const long double fx = f(x_hi);
        if (fx == 0) {
            out.value = total.value();
            out.error = err;
            out.exponent_probe = local_exponent(std::exp(u_hi - 2));
            return out;
        }
        const double p = local_exponent(x_hi);
        out.exponent_probe = p;
        if (p < -1.0 - 1e-9) {
            const long double remainder = fx * (long double)x_hi / (long double)(-1.0 - p);
            if (remainder <= rel_tol * std::fabs((double)total.value()) ||
                remainder < 1e-300) {
                total.add(remainder);
                err += std::fabs((double)remainder) * 1e-2;  // drift slop on the power model
                out.value = total.value();
                out.error = err;
                return out;
            }
        } else if (block >= 6 && p > -1.0 + 1e-9) {
            out.divergent = true;
            out.value = std::numeric_limits<long double>::infinity();
            return out;
        }
    }
    out.divergent = true;  // never settled: treat as not convergent at tolerance
    out.value = std::numeric_limits<long double>::infinity();
    return out;
}

EulerMaclaurinTail tail_sum(const std::function<long double(double)>& f, double n0,
                            double rel_tol) {
    EulerMaclaurinTail out;
    auto deriv1 = [&](double x) -> long double {
        return (-f(x - 3) + 9 * f(x - 2) - 45 * f(x - 1) + 45 * f(x + 1) - 9 * f(x + 2) +
                f(x + 3)) /
               60.0L;
    };
    auto deriv2 = [&](double x) -> long double {
        return (2 * f(x - 3) - 27 * f(x - 2) + 270 * f(x - 1) - 490 * f(x) + 270 * f(x + 1) -
                27 * f(x + 2) + 2 * f(x + 3)) /
               180.0L;
    };
    auto deriv3 = [&](double x) -> long double {
        return (f(x - 3) - 8 * f(x - 2) + 13 * f(x - 1) - 13 * f(x + 1) + 8 * f(x + 2) -
                f(x + 3)) /
               8.0L;
    };

    // Dead input: nothing to sum.
    if (f(n0) == 0 && f(n0 + 1) == 0 && f(n0 + 3.5) == 0 && f(4 * n0) == 0) {
        out.shape = "zero";
        return out;
    }

    TailIntegral I = integrate_tail(f, n0, rel_tol);
    if (I.divergent) {
        out.divergent = true;
        return out;
    }
    const long double f0 = f(n0);
    const long double d1 = deriv1(n0);
    const long double d3 = deriv3(n0);
    out.value = I.value + f0 / 2 - d1 / 12 + d3 / 720;
    out.error = std::fabs((double)d3) / 720 * 0.2 + I.error + 1e-18L * std::fabs((double)out.value);

    // Shape detection for rigorous-style bounds on the plain sum.
    auto decreasing_at = [&](double x) { return deriv1(x) < 0 || f(x + 3) == 0; };
    const double probes[3] = {n0 + 0.5, n0 * 4, n0 * 32};
    bool monotone = true;
    for (double p : probes) monotone = monotone && decreasing_at(p);
    if (monotone) {
        // Convexity probed near the cut; far probes are allowed to drown in
        // rounding noise of the second difference.
        const long double dd_near = deriv2(n0 - 0.5);
        const long double noise = 1e-3L * std::fabs((double)dd_near) + 1e-280L;
        const bool convex = dd_near > 0 && deriv2(n0 + 2) > -noise && deriv2(4 * n0) > -noise;
        auto u_integrand = [&](double u) { return f(std::exp(u)) * (long double)std::exp(u); };
        if (convex) {
            // Midpoint rule: f(n) <= int_{n-1/2}^{n+1/2} f for convex f.
            auto mid = integrate_gk(u_integrand, std::log(n0 - 0.5), std::log(n0), rel_tol, 0);
            const long double M = I.value + mid.value;
            const long double E =
                (3 * dd_near + std::fabs((double)deriv1(n0 - 0.5))) / 24 + 2 * noise;
            out.bound_hi = M + I.error + mid.error;
            out.bound_lo = M - E - I.error - mid.error;
            out.shape = "convex";
            return out;
        }
        // Integral comparison: int_{n0}^inf f <= sum_{n>=n0} f <= int_{n0-1}^inf f.
        auto pre = integrate_gk(u_integrand, std::log(std::max(n0 - 1, 1e-6)), std::log(n0),
                                rel_tol, 0);
        out.bound_lo = I.value - I.error;
        out.bound_hi = I.value + pre.value + I.error + pre.error;
        out.shape = "monotone";
        return out;
    }

    // Unimodal: find the peak by bisection on the derivative sign, widen by the peak value.
    double lo = n0, hi = n0;
    long double fpk = f(n0);
    for (int k = 0; k < 200; ++k) {
        hi = lo * 2;
        fpk = std::max(fpk, f(hi));
        if (deriv1(hi) < 0) break;
        lo = hi;
        if (hi > 1e300) {
            out.divergent = true;
            return out;
        }
    }
    for (int k = 0; k < 80; ++k) {
        const double m = std::sqrt(lo * hi);
        fpk = std::max(fpk, f(m));
        (deriv1(m) < 0 ? hi : lo) = m;
    }
    const long double slop = 2 * fpk + f(n0) + I.error;
    out.bound_lo = I.value - slop;
    out.bound_hi = I.value + slop;
    out.shape = "unimodal";
    return out;
}

// --- root finding --------------------------------------------------------------

double bisect(const std::function<double(double)>& f, double a, double b, double fa, double fb,
              double xtol, int max_iter) {
    if (!(fa <= 0) == !(fb <= 0))
        throw ConvergenceError("bisect: no sign change on the given bracket");
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm <= 0) == (fa <= 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return 0.5 * (a + b);
}

double newton_bracketed(const std::function<void(double, double&, double&)>& f_df, double a,
                        double b, double x0, double ftol, int max_iter) {
    double x = std::min(std::max(x0, a), b);
    double fx, dfx;
    f_df(x, fx, dfx);
    double fa_sign;
    {
        double fa, dfa;
        f_df(a, fa, dfa);
        fa_sign = fa;
    }
    for (int i = 0; i < max_iter; ++i) {
        if (std::fabs(fx) <= ftol) return x;
        double step = dfx != 0 ? -fx / dfx : 0;
        double xn = x + step;
        if (!(xn > a) || !(xn < b) || step == 0) xn = 0.5 * (a + b);
        double fn, dfn;
        f_df(xn, fn, dfn);
        if ((fn <= 0) == (fa_sign <= 0))
            a = xn;
        else
            b = xn;
        x = xn;
        fx = fn;
        dfx = dfn;
    }
    if (std::fabs(fx) > ftol)
        throw ConvergenceError("newton_bracketed: residual above tolerance after max iterations");
    return x;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double xtol) {
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit out;
    out.n = (int)x.size();
    if (x.size() != y.size() || x.size() < 3)
        throw ParamError("fit_line: need at least 3 matched points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= out.n;
    my /= out.n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw ParamError("fit_line: degenerate abscissae");
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (out.slope * x[i] + out.intercept);
        ss += r * r;
        out.max_abs_residual = std::max(out.max_abs_residual, std::fabs(r));
    }
    if (out.n > 2) out.stderr_slope = std::sqrt(ss / (out.n - 2) / sxx);
    return out;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
    if (!(lo > 0) || !(hi > lo)) throw ParamError("geometric_grid: need 0 < lo < hi");
    if (count < 2) throw ParamError("geometric_grid: count must be >= 2");
    std::vector<double> g(count);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < count; ++i) g[i] = lo * std::exp(ratio * i / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace birkhoff
