#pragma once

#include <string>
#include <vector>

#include "birkhoff/numerics.hpp"
#include "birkhoff/spectrum.hpp"

namespace birkhoff {

struct RateFit {
    double fitted_exponent = 0;   // decay exponent of b* - b(alpha)
    double theoretical = 0;       // beta / (1 - beta)
    double stderr_slope = 0;
    double q_exponent_fit = 0;    // slope of log q vs log alpha
    double q_theoretical = 0;     // -1 / (1 - beta)
    double window_lo = 0, window_hi = 0;
    int points_used = 0;
};

// Least-squares exponents of the gap b* - b(alpha) and of q(alpha) over the
// window. Every used point must satisfy gap > 100 * residual_p.
RateFit fit_rate_exponent(const SpectrumCurve& curve, double b_star, double window_lo,
                          double window_hi, double beta);

struct QIntegralRow {
    double alpha = 0;
    double gap = 0;       // b* - b(alpha)
    double integral = 0;  // int_alpha^inf q(t) dt (grid trapezoid + fitted tail)
    double ratio = 0;
};

struct QIntegralReport {
    std::vector<QIntegralRow> rows;
    double ratio_min = 0, ratio_max = 0;
    double q_tail_exponent = 0;
    bool tail_law_valid = true;  // fitted q exponent < -1 (required for convergence)
    std::string note;
};

QIntegralReport q_integral_check(const SpectrumCurve& curve, double b_star);

enum class ProbeClass { Decaying, Growing, Indeterminate };

struct ProbeRow {
    double x = 0;
    ProbeClass cls = ProbeClass::Indeterminate;
    std::vector<std::pair<double, double>> products;  // (alpha, (b*-b) alpha^x)
};

// Product (b* - b(alpha)) alpha^x along the tail of the grid, classified by
// comparing the first and last third of the window.
std::vector<ProbeRow> scaled_limit_probe(const SpectrumCurve& curve, double b_star,
                                         const std::vector<double>& exponents);

const char* probe_class_name(ProbeClass c);

}  // namespace birkhoff
