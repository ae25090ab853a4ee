#include "birkhoff/tail.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/errors.hpp"

namespace birkhoff {

namespace {

// Shell index of a letter: n with omega(n) <= tau < omega(n+1).
std::uint64_t shell_of(const System& sys, double tau) {
    const double x = sys.scale.inverse(tau) * (1 + 1e-13);
    return (std::uint64_t)std::max(1.0, std::floor(x));
}

// Per-shell measure source: closed form, or Gibbs weights at (0, b*).
std::vector<double> shell_measures(const System& sys, int n_shells,
                                   const std::vector<ShellStats>& shells) {
    std::vector<double> mu(n_shells + 1, 0.0);
    if (sys.has_mu_closed_form) {
        for (int n = 1; n <= n_shells; ++n)
            mu[n] = shells[n - 1].count * sys.mu_letter(n);
        return mu;
    }
    const double bstar = bowen_dimension(sys, 1e-11).value;
    std::uint64_t need = sys.finite ? sys.alphabet_size : 200000;
    GibbsMeasure g = gibbs_weights(sys, {0, 0, bstar}, need);
    for (const auto& [letter, w] : g.letter_weights) {
        const double tau = sys.term(letter).tau;
        const std::uint64_t s = shell_of(sys, tau);
        if (s >= 1 && s <= (std::uint64_t)n_shells) mu[s] += w;
    }
    return mu;
}

}  // namespace

std::vector<ShellStats> shell_census(const System& sys, int n_shells) {
    if (n_shells < 1) throw ParamError("shell_census: need at least one shell");
    std::vector<ShellStats> out(n_shells);
    for (int n = 1; n <= n_shells; ++n) {
        out[n - 1].n = n;
        out[n - 1].omega_lo = sys.scale((double)n);
        out[n - 1].omega_hi = sys.scale((double)n + 1);
    }
    const double omega_top = sys.scale((double)n_shells + 1);
    for (std::uint64_t a = 1;; ++a) {
        if (sys.finite && a > sys.alphabet_size) break;
        const Term t = sys.term(a);
        if (t.tau >= omega_top) break;
        const std::uint64_t s = shell_of(sys, t.tau);
        if (s >= 1 && s <= (std::uint64_t)n_shells) out[s - 1].count += t.count;
        if (a > (std::uint64_t)n_shells + 1000000)
            throw CapacityError("shell_census: letter scan exceeded its budget");
    }
    auto mu = shell_measures(sys, n_shells, out);
    for (int n = 1; n <= n_shells; ++n) {
        out[n - 1].measure = mu[n];
        if (out[n - 1].count < 1)
            throw DomainError("shell_census: empty shell " + std::to_string(n) +
                              " violates (H1) for the chosen omega");
    }
    return out;
}

double h1_smallest_constant(const System& sys, double eps, int n_shells) {
    if (!(eps > 0)) throw ParamError("h1_smallest_constant: eps must be positive");
    auto shells = shell_census(sys, n_shells);
    double c = 0;
    for (const auto& s : shells) c = std::max(c, s.count * std::exp(-eps * s.omega_lo));
    return c;
}

TailExponentFit estimate_tail_exponent(const System& sys, double t_max) {
    if (!sys.mu_tau_exceeds)
        throw ParamError("estimate_tail_exponent: no geometric measure available for " +
                         sys.desc.name);
    std::vector<double> lx, ly;
    for (double t = 8; t <= t_max; t *= 2) {
        const double mu = sys.mu_tau_exceeds(t);
        if (!(mu > 0) || !std::isfinite(mu))
            throw DomainError("estimate_tail_exponent: non-finite tail measure at t=" +
                              std::to_string(t));
        lx.push_back(std::log(t));
        ly.push_back(std::log(mu));
    }
    if (lx.size() < 3)
        throw ParamError("estimate_tail_exponent: degenerate regression (fewer than 3 points)");
    if (lx.size() < 20)
        throw ParamError("estimate_tail_exponent: t_max too small for 20 sample points");
    TailExponentFit out;
    out.fit = fit_line(lx, ly);
    out.beta_hat = -out.fit.slope;
    out.stderr_slope = out.fit.stderr_slope;
    out.points = out.fit.n;
    return out;
}

H3Report h3_ratio_probe(const System& sys, double q, double b, int n_shells,
                        EngineOptions opt) {
    if (q < 0) throw ParamError("h3_ratio_probe: (q,b) must lie in the finiteness domain");
    const double bstar = sys.known_b_star > 0 ? sys.known_b_star
                                              : bowen_dimension(sys, 1e-10).value;
    auto shells = shell_census(sys, n_shells);

    // mu_{q,b} shell masses from depth-1 equilibrium weights.
    opt.n_direct = std::max<std::uint64_t>(opt.n_direct, (std::uint64_t)n_shells + 2);
    GibbsMeasure g = gibbs_weights(sys, {0, q, b}, std::max<std::uint64_t>(n_shells + 1, 200),
                                   opt);
    std::vector<double> mu_qb(n_shells + 1, 0.0);
    for (const auto& [letter, w] : g.letter_weights) {
        if (letter > (std::uint64_t)n_shells) break;
        const std::uint64_t s = shell_of(sys, sys.term(letter).tau);
        if (s >= 1 && s <= (std::uint64_t)n_shells) mu_qb[s] += w;
    }

    H3Report rep;
    const double b1 = sys.tail_model.beta1, b2 = sys.tail_model.beta2;
    std::vector<double> core_lo(n_shells + 1), core_hi(n_shells + 1), ratio(n_shells + 1);
    for (int n = 1; n <= n_shells; ++n) {
        const auto& s = shells[n - 1];
        if (!(mu_qb[n] > 0))
            throw DomainError("h3_ratio_probe: equilibrium shell mass vanished at shell " +
                              std::to_string(n));
        ratio[n] = s.measure / mu_qb[n];
        core_lo[n] = std::exp(q * s.omega_lo) * std::pow(s.omega_hi, -b2 * (bstar - b));
        core_hi[n] = std::exp(q * s.omega_hi) * std::pow(s.omega_lo, -b1 * (bstar - b));
    }
    // Comparability constants fitted beyond the pre-asymptotic shells.
    double c1 = 1e300, c2 = -1e300;
    for (int n = std::min(5, n_shells); n <= n_shells; ++n) {
        c1 = std::min(c1, ratio[n] / core_lo[n]);
        c2 = std::max(c2, ratio[n] / core_hi[n]);
    }
    rep.c1 = c1;
    rep.c2 = c2;
    for (int n = 1; n <= n_shells; ++n) {
        H3Row row;
        row.shell = n;
        row.ratio = ratio[n];
        row.lower = c1 * core_lo[n];
        row.upper = c2 * core_hi[n];
        const double slack = 1e-9 * (1 + std::fabs(row.ratio));
        if (!(row.ratio >= row.lower - slack && row.ratio <= row.upper + slack)) {
            rep.sandwich_holds = false;
            rep.diagnostic += "shell " + std::to_string(n) + ": ratio " +
                              std::to_string(row.ratio) + " outside [" +
                              std::to_string(row.lower) + ", " + std::to_string(row.upper) +
                              "]; ";
        }
        rep.rows.push_back(row);
    }
    return rep;
}

BranchCountCheck branch_count_bounds(const System& sys, int n_shells) {
    BranchCountCheck out;
    if (sys.scale.kind != ScaleFunction::Kind::Polynomial) return out;
    out.applies = true;
    const double bstar = sys.known_b_star > 0 ? sys.known_b_star : 1.0;
    const double beta = sys.tail_model.beta;
    const double c1 = sys.tail_model.beta1 * bstar - beta;
    const double c2 = sys.tail_model.beta2 * bstar - beta;
    auto shells = shell_census(sys, n_shells);
    out.fit_lo = 1e300;
    out.fit_hi = -1e300;
    for (const auto& s : shells) {
        const double wp = sys.scale.derivative((double)s.n);
        const double lo_core = wp * std::pow(s.omega_lo, c1 - 1);
        const double hi_core = wp * std::pow(s.omega_lo, c2 - 1);
        out.fit_lo = std::min(out.fit_lo, s.count / lo_core);
        out.fit_hi = std::max(out.fit_hi, s.count / hi_core);
    }
    return out;
}

}  // namespace birkhoff
