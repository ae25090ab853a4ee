#include "birkhoff/rate.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/errors.hpp"

namespace birkhoff {

RateFit fit_rate_exponent(const SpectrumCurve& curve, double b_star, double window_lo,
                          double window_hi, double beta) {
    std::vector<double> lx, lg, lq;
    for (const auto& p : curve.points) {
        if (p.alpha < window_lo || p.alpha > window_hi) continue;
        const double gap = b_star - p.b;
        if (!(gap > 0))
            throw DomainError("fit_rate_exponent: nonpositive gap at alpha=" +
                              std::to_string(p.alpha));
        if (gap < 100 * p.residual_p)
            throw DomainError("fit_rate_exponent: gap below solver noise at alpha=" +
                              std::to_string(p.alpha));
        lx.push_back(std::log(p.alpha));
        lg.push_back(std::log(gap));
        lq.push_back(std::log(p.q));
    }
    if (lx.size() < 8)
        throw ParamError("fit_rate_exponent: need at least 8 points inside the window");
    RateFit out;
    LineFit fg = fit_line(lx, lg);
    LineFit fq = fit_line(lx, lq);
    out.fitted_exponent = -fg.slope;
    out.stderr_slope = fg.stderr_slope;
    out.q_exponent_fit = fq.slope;
    out.theoretical = beta / (1 - beta);
    out.q_theoretical = -1.0 / (1 - beta);
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    out.points_used = (int)lx.size();
    return out;
}

QIntegralReport q_integral_check(const SpectrumCurve& curve, double b_star) {
    const auto& P = curve.points;
    if (P.size() < 6) throw ParamError("q_integral_check: need at least 6 solved points");
    QIntegralReport rep;

    // Fit the q power law on the final decade to extend the integral beyond the grid.
    const double a_hi = P.back().alpha;
    std::vector<double> lx, lq;
    for (const auto& p : P)
        if (p.alpha >= a_hi / 10) {
            lx.push_back(std::log(p.alpha));
            lq.push_back(std::log(p.q));
        }
    double tail_integral = 0;
    if (lx.size() >= 3) {
        LineFit f = fit_line(lx, lq);
        rep.q_tail_exponent = f.slope;
        if (f.slope < -1 - 1e-6) {
            const double c = std::exp(f.intercept);
            tail_integral = c * std::pow(a_hi, f.slope + 1) / (-f.slope - 1);
        } else {
            rep.tail_law_valid = false;
            rep.note = "fitted q exponent " + std::to_string(f.slope) +
                       " >= -1: tail integral dropped (bad fit; the theoretical exponent "
                       "-1/(1-beta) is always < -1)";
        }
    } else {
        rep.tail_law_valid = false;
        rep.note = "too few points in the final decade for a tail law";
    }

    // Cumulative trapezoid from the right.
    std::vector<double> cum(P.size(), 0.0);
    cum[P.size() - 1] = tail_integral;
    for (size_t i = P.size() - 1; i-- > 0;) {
        const double h = P[i + 1].alpha - P[i].alpha;
        cum[i] = cum[i + 1] + 0.5 * h * (P[i].q + P[i + 1].q);
    }
    rep.ratio_min = 1e300;
    rep.ratio_max = -1e300;
    for (size_t i = 0; i < P.size(); ++i) {
        if (P[i].alpha < a_hi / 100) continue;  // report the final two decades
        QIntegralRow row;
        row.alpha = P[i].alpha;
        row.gap = b_star - P[i].b;
        row.integral = cum[i];
        row.ratio = row.integral > 0 ? row.gap / row.integral : 0;
        rep.ratio_min = std::min(rep.ratio_min, row.ratio);
        rep.ratio_max = std::max(rep.ratio_max, row.ratio);
        rep.rows.push_back(row);
    }
    if (rep.rows.empty()) throw ParamError("q_integral_check: no points in the final decades");
    return rep;
}

std::vector<ProbeRow> scaled_limit_probe(const SpectrumCurve& curve, double b_star,
                                         const std::vector<double>& exponents) {
    const auto& P = curve.points;
    if (P.size() < 6) throw ParamError("scaled_limit_probe: need at least 6 solved points");
    const double a_hi = P.back().alpha;
    const double a_lo = std::max(P.front().alpha, a_hi / 100);
    std::vector<ProbeRow> out;
    for (double x : exponents) {
        ProbeRow row;
        row.x = x;
        double first_sum = 0, last_sum = 0;
        int first_n = 0, last_n = 0;
        const double lo_log = std::log(a_lo), hi_log = std::log(a_hi);
        for (const auto& p : P) {
            if (p.alpha < a_lo) continue;
            const double prod = (b_star - p.b) * std::pow(p.alpha, x);
            row.products.emplace_back(p.alpha, prod);
            const double frac = (std::log(p.alpha) - lo_log) / (hi_log - lo_log);
            if (frac <= 1.0 / 3) {
                first_sum += prod;
                ++first_n;
            } else if (frac >= 2.0 / 3) {
                last_sum += prod;
                ++last_n;
            }
        }
        if (first_n > 0 && last_n > 0) {
            const double first_mean = first_sum / first_n, last_mean = last_sum / last_n;
            if (last_mean >= 3 * first_mean)
                row.cls = ProbeClass::Growing;
            else if (first_mean >= 3 * last_mean)
                row.cls = ProbeClass::Decaying;
            else
                row.cls = ProbeClass::Indeterminate;
        }
        out.push_back(std::move(row));
    }
    return out;
}

const char* probe_class_name(ProbeClass c) {
    switch (c) {
        case ProbeClass::Decaying: return "decaying";
        case ProbeClass::Growing: return "growing";
        default: return "indeterminate";
    }
}

}  // namespace birkhoff
