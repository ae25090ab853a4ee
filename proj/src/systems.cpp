#include "birkhoff/systems.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "birkhoff/errors.hpp"
#include "birkhoff/numerics.hpp"

namespace birkhoff {

namespace {

constexpr std::uint64_t kExactRegion = 20000;  // exact letter data below, model above

// sum over n >= from of n^{-p}, p > 1
double zeta_tail(double p, double from) {
    CompensatedSum<long double> s;
    const std::uint64_t n0 = (std::uint64_t)from;
    const std::uint64_t cut = n0 + kExactRegion;
    for (std::uint64_t n = n0; n < cut; ++n) s.add(std::pow((long double)n, (long double)-p));
    auto tail = tail_sum([p](double x) { return powl((long double)x, (long double)-p); },
                         (double)cut, 1e-15);
    if (tail.divergent) throw DomainError("zeta_tail: exponent not summable");
    s.add(tail.value);
    return (double)s.value();
}

double require_integer_ge2(double v, const char* name, const char* sys) {
    if (!(v > 1) || std::fabs(v - std::llround(v)) > 1e-12)
        throw ParamError(std::string(sys) + ": " + name + " must be an integer > 1 (got " +
                         std::to_string(v) + ")");
    return (double)std::llround(v);
}

}  // namespace

double ScaleFunction::operator()(double x) const {
    return kind == Kind::Polynomial ? std::pow(x, exponent) : std::exp(exponent * x);
}
double ScaleFunction::derivative(double x) const {
    return kind == Kind::Polynomial ? exponent * std::pow(x, exponent - 1)
                                    : exponent * std::exp(exponent * x);
}
double ScaleFunction::inverse(double w) const {
    return kind == Kind::Polynomial ? std::pow(w, 1.0 / exponent) : std::log(w) / exponent;
}

std::string SystemDescriptor::to_text() const {
    std::ostringstream os;
    os << "system=" << name << "\n";
    os.precision(17);
    for (const auto& [k, v] : params) os << k << "=" << v << "\n";
    return os.str();
}

Term System::smooth_or_term(double x) const {
    if (smooth.usable && x >= smooth.model_start) return smooth.eval(x);
    return term((std::uint64_t)std::llround(x));
}

// --- Lueroth ---------------------------------------------------------------------

System make_lueroth(int r) {
    if (r < 2) throw ParamError("lueroth: r must be an integer > 1");
    System s;
    s.desc = {"lueroth", {{"r", (double)r}}};
    s.family = Family::Lueroth;
    s.image = {0, 1};
    s.expansion_constant = 2;
    s.known_b_star = 1;
    s.scale = {ScaleFunction::Kind::Polynomial, (double)r, std::pow(2.0, r)};
    s.tail_model = {1.0 / r, 2.0 / r, 2.0 / r, 0.5, 2.0};
    const double rr = r;
    s.term = [rr](std::uint64_t n) -> Term {
        const double nd = (double)n;
        return {std::pow(nd, rr), std::log(nd) + std::log(nd + 1), 1};
    };
    s.smooth = {true, 1.0, [rr](double x) -> Term {
                    return {std::pow(x, rr), std::log(x) + std::log(x + 1), 1};
                }};
    s.branch = [rr](std::uint64_t n) -> Branch {
        const double nd = (double)n;
        return {n, {1.0 / (nd + 1), 1.0 / nd}, ConstantSlope{nd * (nd + 1)},
                std::pow(nd, rr)};
    };
    s.has_mu_closed_form = true;
    s.mu_letter = [](std::uint64_t n) { return 1.0 / ((double)n * (n + 1.0)); };
    s.mu_tau_exceeds = [rr](double t) {
        const double m = std::floor(std::pow(std::max(t, 0.0), 1.0 / rr)) + 1;
        return 1.0 / m;
    };
    s.alpha_min = 1;
    return s;
}

// --- Gauss -------------------------------------------------------------------------

System make_gauss(int r) {
    if (r < 2) throw ParamError("gauss: r must be an integer > 1");
    System s;
    s.desc = {"gauss", {{"r", (double)r}}};
    s.family = Family::Gauss;
    s.image = {0, 1};
    s.expansion_constant = 2;  // via the second iterate, (F^2)' >= 4
    s.expansion_iterate = 2;
    s.constant_slope = false;
    s.known_b_star = 1;
    s.scale = {ScaleFunction::Kind::Polynomial, (double)r, std::pow(2.0, r)};
    s.tail_model = {1.0 / r, 2.0 / r, 2.0 / r, 0.5, 2.0};
    const double rr = r;
    // Representative slope n(n+1): geometric mean of the endpoint derivatives.
    s.term = [rr](std::uint64_t n) -> Term {
        const double nd = (double)n;
        return {std::pow(nd, rr), std::log(nd) + std::log(nd + 1), 1};
    };
    s.smooth = {true, 1.0, [rr](double x) -> Term {
                    return {std::pow(x, rr), std::log(x) + std::log(x + 1), 1};
                }};
    s.branch = [rr](std::uint64_t n) -> Branch {
        const double nd = (double)n;
        AnalyticDeriv d;
        d.abs_deriv = [](double x) { return 1.0 / (x * x); };
        d.inf_deriv = nd * nd;
        d.sup_deriv = (nd + 1) * (nd + 1);
        d.distortion = d.sup_deriv / d.inf_deriv;
        return {n, {1.0 / (nd + 1), 1.0 / nd}, d, std::pow(nd, rr)};
    };
    s.has_mu_closed_form = true;
    const double ln2 = std::log(2.0);
    s.mu_letter = [ln2](std::uint64_t n) {
        const double nd = (double)n;
        return std::log1p(1.0 / (nd * (nd + 2))) / ln2;
    };
    s.mu_tau_exceeds = [rr, ln2](double t) {
        const double m = std::floor(std::pow(std::max(t, 0.0), 1.0 / rr)) + 1;
        return std::log1p(1.0 / m) / ln2;
    };
    s.alpha_min = 1;
    return s;
}

// --- linear families ----------------------------------------------------------------

System make_linear_poly(double r, double s_exp) {
    if (!(r > 0)) throw ParamError("linear_poly: r must satisfy r > 0");
    if (!(s_exp > 0 && s_exp < r))
        throw ParamError("linear_poly: s must satisfy 0 < s < r");
    System s;
    s.desc = {"linear_poly", {{"r", r}, {"s", s_exp}}};
    s.family = Family::LinearPoly;
    s.image = {0, 1};
    s.known_b_star = 1;
    s.scale = {ScaleFunction::Kind::Polynomial, r, std::pow(2.0, r)};
    const double beta = s_exp / r;
    s.tail_model = {beta, beta + 1 / r, beta + 1 / r, 0.5, 2.0};
    const double Cs = 1.0 / zeta_tail(1 + s_exp, 1);  // lengths C_s n^{-(1+s)} sum to 1
    const double logCs = std::log(Cs);
    s.expansion_constant = 1.0 / Cs;
    s.term = [r, s_exp, logCs](std::uint64_t n) -> Term {
        const double nd = (double)n;
        return {std::pow(nd, r), (1 + s_exp) * std::log(nd) - logCs, 1};
    };
    s.smooth = {true, 1.0, [r, s_exp, logCs](double x) -> Term {
                    return {std::pow(x, r), (1 + s_exp) * std::log(x) - logCs, 1};
                }};
    s.branch = [r, s_exp, Cs](std::uint64_t n) -> Branch {
        double left = 0;
        for (std::uint64_t k = 1; k < n; ++k) left += Cs * std::pow((double)k, -(1 + s_exp));
        const double len = Cs * std::pow((double)n, -(1 + s_exp));
        return {n, {left, left + len}, ConstantSlope{1.0 / len}, std::pow((double)n, r)};
    };
    s.has_mu_closed_form = true;
    s.mu_letter = [Cs, s_exp](std::uint64_t n) { return Cs * std::pow((double)n, -(1 + s_exp)); };
    s.mu_tau_exceeds = [r, Cs, s_exp](double t) {
        const double m = std::floor(std::pow(std::max(t, 0.0), 1.0 / r)) + 1;
        return Cs * zeta_tail(1 + s_exp, m);
    };
    s.alpha_min = 1;
    return s;
}

System make_linear_count(double a, double b, double c) {
    if (!(c > 0 && c < a)) throw ParamError("linear_count: need 0 < c < a");
    if (!(b > 0)) throw ParamError("linear_count: need b > 0");
    const double beta = (a - c - 1) / b;
    if (!(beta > 0 && beta < 1))
        throw ParamError("linear_count: need (a-c-1)/b in (0,1), got " + std::to_string(beta));
    System s;
    s.desc = {"linear_count", {{"a", a}, {"b", b}, {"c", c}}};
    s.family = Family::LinearCount;
    s.image = {0, 1};
    s.known_b_star = 1;
    s.scale = {ScaleFunction::Kind::Polynomial, b, std::pow(2.0, b)};
    s.tail_model = {beta, a / b, a / b, 0.5, 2.0};

    // Shell n: count(n) branches of equal length; total shell length C n^{c-a}.
    // Exact integer counts floor(n^c) below the model junction, smooth n^c above;
    // the junction is fixed here so every later sum sees one and the same system.
    auto count_of = [c](std::uint64_t n) -> double {
        if (n < kExactRegion) return std::max(1.0, std::floor(std::pow((double)n, c)));
        return std::pow((double)n, c);
    };
    // Shell totals are smooth by construction: sum_n C n^{c-a} = 1.
    double S;
    {
        CompensatedSum<long double> acc;
        for (std::uint64_t n = 1; n < kExactRegion; ++n)
            acc.add(powl((long double)n, (long double)(c - a)));
        auto tail = tail_sum(
            [a, c](double x) { return powl((long double)x, (long double)(c - a)); },
            (double)kExactRegion, 1e-15);
        acc.add(tail.value);
        S = (double)acc.value();
    }
    const double C = 1.0 / S;
    const double logC = std::log(C);
    s.expansion_constant = 1.0 / C;

    s.term = [a, b, c, logC, count_of](std::uint64_t n) -> Term {
        const double nd = (double)n;
        const double cnt = count_of(n);
        // slope = count / (C n^{c-a}); per-branch length C n^{c-a} / count
        const double logd = std::log(cnt) + (a - c) * std::log(nd) - logC;
        return {std::pow(nd, b), logd, cnt};
    };
    s.smooth = {true, (double)kExactRegion, [a, b, c, logC](double x) -> Term {
                    const double cnt = std::pow(x, c);
                    return {std::pow(x, b), std::log(cnt) + (a - c) * std::log(x) - logC, cnt};
                }};
    s.branch = [a, b, c, C, count_of](std::uint64_t index) -> Branch {
        std::uint64_t n = 1, seen = 0;
        for (;; ++n) {
            const std::uint64_t cnt = (std::uint64_t)count_of(n);
            if (seen + cnt >= index) break;
            seen += cnt;
            if (n > 100000000) throw CapacityError("linear_count: branch index out of range");
        }
        double left = 0;
        for (std::uint64_t k = 1; k < n; ++k) left += C * std::pow((double)k, c - a);
        const double cnt = count_of(n);
        const double len = C * std::pow((double)n, c - a) / cnt;
        left += (double)(index - seen - 1) * len;
        return {index, {left, left + len}, ConstantSlope{1.0 / len}, std::pow((double)n, b)};
    };
    s.has_mu_closed_form = true;
    s.mu_letter = [C, a, c, count_of](std::uint64_t n) {
        return C * std::pow((double)n, c - a) / count_of(n);
    };
    s.mu_tau_exceeds = [b, C, a, c](double t) {
        const double m = std::floor(std::pow(std::max(t, 0.0), 1.0 / b)) + 1;
        return C * zeta_tail(a - c, m);
    };
    s.alpha_min = 1;
    return s;
}

System make_linear_exp(double beta) {
    if (!(beta > 0 && beta < 1)) throw ParamError("linear_exp: beta must lie in (0,1)");
    System s;
    s.desc = {"linear_exp", {{"beta", beta}}};
    s.family = Family::LinearExp;
    s.image = {0, 1};
    s.known_b_star = 1;
    s.scale = {ScaleFunction::Kind::Exponential, 1.0, std::exp(1.0)};
    s.tail_model = {beta, beta + std::log(2.0), beta + std::log(2.0), 0.5, 2.0};
    const double K = std::exp(beta) - 1;  // sum_n K e^{-beta n} = 1
    const double logK = std::log(K);
    const double ln2 = std::log(2.0);
    s.expansion_constant = 2 * std::exp(beta) / K;
    // Shell n: 2^n branches of length K 2^{-n} e^{-beta n}, tau = e^n.
    s.term = [beta, logK, ln2](std::uint64_t n) -> Term {
        const double nd = (double)n;
        return {std::exp(nd), nd * ln2 + beta * nd - logK, std::exp(nd * ln2), nd * ln2};
    };
    s.smooth.usable = false;  // tau grows exponentially: direct summation terminates fast
    s.branch = [beta, K, ln2](std::uint64_t index) -> Branch {
        std::uint64_t n = 1, seen = 0;
        for (;; ++n) {
            const std::uint64_t cnt = (std::uint64_t)1 << n;
            if (seen + cnt >= index) break;
            seen += cnt;
            if (n > 60) throw CapacityError("linear_exp: branch index out of range");
        }
        double left = 0;
        for (std::uint64_t k = 1; k < n; ++k) left += K * std::exp(-beta * (double)k);
        const double len = K * std::exp(-(ln2 + beta) * (double)n);
        left += (double)(index - seen - 1) * len;
        return {index, {left, left + len}, ConstantSlope{1.0 / len}, std::exp((double)n)};
    };
    s.has_mu_closed_form = true;
    s.mu_letter = [beta, K, ln2](std::uint64_t n) {
        return K * std::exp(-(ln2 + beta) * (double)n);
    };
    s.mu_tau_exceeds = [beta, K](double t) {
        const double m = std::floor(std::log(std::max(t, 1.0))) + 1;
        return K * std::exp(-beta * m) / (1 - std::exp(-beta));
    };
    s.alpha_min = std::exp(1.0);
    return s;
}

// --- Manneville-Pomeau induced map ---------------------------------------------------

namespace {

struct MpData {
    double lambda;
    double pow2l;                 // 2^lambda
    std::vector<double> y;        // backward orbit, y[0] = 1
    double model_A, model_C, model_B;  // u(x) = A x - C log x + B
    std::uint64_t n0;             // exact region bound (y has n0+1 entries)

    double f(double x) const { return x * (1 + pow2l * std::pow(x, lambda)); }
    double fp(double x) const { return 1 + pow2l * (lambda + 1) * std::pow(x, lambda); }

    double y_model(double x) const {
        const double u = model_A * x - model_C * std::log(x) + model_B;
        return std::pow(u, -1.0 / lambda);
    }
    double y_at(double k) const {
        if (k <= (double)n0) return y[(std::size_t)std::llround(k)];
        return y_model(k);
    }
    // (y(x-1) - y(x))/2 in the model region, free of cancellation:
    // y(x-1)/y(x) = (1 - du/u)^{-1/lambda} with du = u(x) - u(x-1).
    double len_model(double x) const {
        const double u = model_A * x - model_C * std::log(x) + model_B;
        const double du = model_A - model_C * std::log1p(1.0 / (x - 1));
        const double y = std::pow(u, -1.0 / lambda);
        return 0.5 * y * std::expm1(-(1.0 / lambda) * std::log1p(-du / u));
    }
    double len_at(double n) const {
        if (n <= (double)n0) {
            const std::size_t k = (std::size_t)std::llround(n);
            return (y[k - 1] - y[k]) / 2;
        }
        return len_model(n);
    }
};

std::shared_ptr<MpData> build_mp_data(double lambda, std::uint64_t n0) {
    auto d = std::make_shared<MpData>();
    d->lambda = lambda;
    d->pow2l = std::pow(2.0, lambda);
    d->n0 = n0;
    d->y.resize(n0 + 1);
    d->y[0] = 1.0;
    if (n0 >= 1) d->y[1] = 0.5;
    for (std::uint64_t k = 2; k <= n0; ++k) {
        const double target = d->y[k - 1];
        double lo = 0, hi = std::min(0.5, target);
        // The left branch is monotone on [0,1/2): bracketing is guaranteed.
        for (int it = 0; it < 80 && (hi - lo) > 1e-15; ++it) {
            const double m = 0.5 * (lo + hi);
            (d->f(m) < target ? lo : hi) = m;
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 4; ++it) x -= (d->f(x) - target) / d->fp(x);
        if (!(x > 0 && x < 0.5) || std::fabs(d->f(x) - target) > 1e-13)
            throw ConvergenceError("mp_induced: preimage solve failed at depth " +
                                   std::to_string(k));
        d->y[k] = x;
    }
    // u_{k+1} = u_k + lambda 2^lambda - ((lambda+1)/2) 4^lambda / u + O(u^-2)
    d->model_A = lambda * d->pow2l;
    d->model_C = (lambda + 1) * d->pow2l / 2;
    const double u_n0 = std::pow(d->y[n0], -lambda);
    d->model_B = u_n0 - d->model_A * (double)n0 + d->model_C * std::log((double)n0);
    return d;
}

}  // namespace

std::vector<double> mp_backward_orbit(double lambda, std::uint64_t N) {
    if (!(lambda > 1)) throw ParamError("mp_induced: lambda must satisfy lambda > 1");
    auto d = build_mp_data(lambda, N);
    return d->y;
}

std::vector<Branch> mp_branch_table(double lambda, std::uint64_t N) {
    if (!(lambda > 1)) throw ParamError("mp_induced: lambda must satisfy lambda > 1");
    if (N < 1) throw ParamError("mp_branch_table: N must be >= 1");
    auto d = build_mp_data(lambda, N);
    std::vector<Branch> out;
    out.reserve(N);
    // cumulative products of f'(y_k)
    std::vector<double> cum(N + 1, 1.0);
    for (std::uint64_t k = 1; k <= N; ++k) cum[k] = cum[k - 1] * d->fp(d->y[k]);
    for (std::uint64_t n = 1; n <= N; ++n) {
        Branch b;
        b.index = n;
        b.interval = {(1 + d->y[n]) / 2, (1 + d->y[n - 1]) / 2};
        b.tau = (double)n;
        AnalyticDeriv deriv;
        deriv.inf_deriv = 2 * cum[n] / cum[1];   // left endpoint: chain over y_2..y_n
        deriv.sup_deriv = 2 * cum[n - 1];        // right endpoint: chain over y_1..y_{n-1}
        deriv.distortion = deriv.sup_deriv / deriv.inf_deriv;
        const auto data = d;
        const std::uint64_t steps = n;
        deriv.abs_deriv = [data, steps](double x) {
            double z = 2 * x - 1, dv = 2;
            for (std::uint64_t j = 0; j + 1 < steps; ++j) {
                dv *= data->fp(z);
                z = data->f(z);
            }
            return dv;
        };
        b.deriv = deriv;
        out.push_back(std::move(b));
    }
    return out;
}

System make_mp_induced(double lambda) {
    if (!(lambda > 1)) throw ParamError("mp_induced: lambda must satisfy lambda > 1");
    System s;
    s.desc = {"mp_induced", {{"lambda", lambda}}};
    s.family = Family::MpInduced;
    s.image = {0.5, 1};
    s.expansion_constant = 2;
    s.known_b_star = 1;
    s.scale = {ScaleFunction::Kind::Polynomial, 1.0, 2.0};
    s.tail_model = {1 / lambda, 1 / lambda + 1, 1 / lambda + 1, 0.5, 2.0};
    const std::uint64_t n0 = 10000;
    auto d = build_mp_data(lambda, n0);

    // Linearised branch model: constant slope |image| / |I_n| (a mean-value
    // derivative of the true branch); exact intervals below n0, the u-model above.
    s.term = [d](std::uint64_t n) -> Term {
        return {(double)n, std::log(0.5 / d->len_at((double)n)), 1};
    };
    s.smooth = {true, (double)(n0 + 2), [d](double x) -> Term {
                    return {x, std::log(0.5 / d->len_model(x)), 1};
                }};
    s.branch = [d](std::uint64_t n) -> Branch {
        const double yl = d->y_at((double)n), yr = d->y_at((double)n - 1);
        return {n, {(1 + yl) / 2, (1 + yr) / 2}, ConstantSlope{0.5 / d->len_at((double)n)},
                (double)n};
    };
    s.has_mu_closed_form = true;  // normalised Lebesgue on (1/2, 1]
    s.mu_letter = [d](std::uint64_t n) { return 2 * d->len_at((double)n); };
    s.mu_tau_exceeds = [d](double t) { return d->y_at(std::floor(std::max(t, 0.0))); };
    s.alpha_min = 1;
    return s;
}

// --- custom / truncated ---------------------------------------------------------------

System make_finite_linear(const std::vector<double>& lengths, const std::vector<double>& taus) {
    if (lengths.empty() || lengths.size() != taus.size())
        throw ParamError("finite_linear: need matching nonempty lengths and taus");
    double total = 0, min_slope = 1e300;
    for (double l : lengths) {
        if (!(l > 0 && l < 1)) throw ParamError("finite_linear: lengths must lie in (0,1)");
        total += l;
        min_slope = std::min(min_slope, 1.0 / l);
    }
    if (total > 1 + 1e-12) throw ParamError("finite_linear: lengths exceed the unit interval");
    for (double t : taus)
        if (!(t >= 0)) throw ParamError("finite_linear: tau values must be nonnegative");
    System s;
    s.desc = {"finite_linear", {{"branches", (double)lengths.size()}}};
    s.family = Family::Custom;
    s.image = {0, 1};
    s.expansion_constant = min_slope;
    s.constant_slope = true;
    s.finite = true;
    s.alphabet_size = lengths.size();
    s.scale = {ScaleFunction::Kind::Polynomial, 1.0, 2.0};
    auto lens = std::make_shared<std::vector<double>>(lengths);
    auto tv = std::make_shared<std::vector<double>>(taus);
    s.term = [lens, tv](std::uint64_t n) -> Term {
        if (n < 1 || n > lens->size()) throw ParamError("finite_linear: letter out of range");
        return {(*tv)[n - 1], std::log(1.0 / (*lens)[n - 1]), 1};
    };
    s.branch = [lens, tv](std::uint64_t n) -> Branch {
        if (n < 1 || n > lens->size()) throw ParamError("finite_linear: letter out of range");
        double left = 0;
        for (std::uint64_t k = 0; k + 1 < n; ++k) left += (*lens)[k];
        return {n, {left, left + (*lens)[n - 1]}, ConstantSlope{1.0 / (*lens)[n - 1]},
                (*tv)[n - 1]};
    };
    double amin = 1e300;
    for (double t : taus) amin = std::min(amin, t);
    s.alpha_min = amin;
    return s;
}

System truncate_system(const System& sys, std::uint64_t N) {
    if (N < 1) throw ParamError("truncate_system: N must be >= 1");
    System s = sys;
    s.desc.name += "_trunc";
    s.desc.params.emplace_back("N", (double)N);
    s.finite = true;
    s.alphabet_size = N;
    s.smooth.usable = false;
    s.has_mu_closed_form = false;
    s.mu_letter = nullptr;
    s.mu_tau_exceeds = nullptr;
    s.known_b_star = 0;
    auto base_term = sys.term;
    s.term = [base_term, N](std::uint64_t n) -> Term {
        if (n < 1 || n > N) throw ParamError("truncated system: letter out of range");
        return base_term(n);
    };
    return s;
}

System build_builtin(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const char* key) -> double {
        auto it = params.find(key);
        if (it == params.end())
            throw ParamError(name + ": missing required parameter '" + key + "'");
        return it->second;
    };
    auto expect_keys = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : params) {
            bool ok = false;
            for (const char* kk : keys) ok = ok || (k == kk);
            if (!ok) throw ParamError(name + ": unknown parameter '" + k + "'");
        }
    };
    if (name == "lueroth") {
        expect_keys({"r"});
        return make_lueroth((int)require_integer_ge2(get("r"), "r", "lueroth"));
    }
    if (name == "gauss") {
        expect_keys({"r"});
        return make_gauss((int)require_integer_ge2(get("r"), "r", "gauss"));
    }
    if (name == "linear_poly") {
        expect_keys({"r", "s"});
        return make_linear_poly(get("r"), get("s"));
    }
    if (name == "linear_count") {
        expect_keys({"a", "b", "c"});
        return make_linear_count(get("a"), get("b"), get("c"));
    }
    if (name == "linear_exp") {
        expect_keys({"beta"});
        return make_linear_exp(get("beta"));
    }
    if (name == "mp_induced") {
        expect_keys({"lambda"});
        return make_mp_induced(get("lambda"));
    }
    throw ParamError("unknown system '" + name +
                     "' (expected one of lueroth, gauss, linear_poly, linear_count, "
                     "linear_exp, mp_induced)");
}

System parse_system_text(const std::string& text) {
    std::istringstream is(text);
    std::string line, name;
    std::map<std::string, double> params;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParamError("system descriptor: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "system")
            name = val;
        else
            params[key] = std::stod(val);
    }
    if (name.empty()) throw ParamError("system descriptor: missing 'system=' line");
    return build_builtin(name, params);
}

}  // namespace birkhoff
