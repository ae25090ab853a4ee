#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "birkhoff/pressure.hpp"
#include "birkhoff/systems.hpp"

namespace birkhoff {

struct SpectrumPoint {
    double alpha = 0;
    double q = 0, b = 0;
    double lyapunov = 0, entropy = 0;
    double mean_tau = 0, var_tau = 0;
    double residual_p = 0, residual_dp = 0;
    int newton_iters = 0;
    std::uint64_t truncation_N = 0;
};

struct SpectrumCurve {
    std::vector<double> grid;
    std::vector<SpectrumPoint> points;  // successes, grid order
    double b_star = 0;
    std::vector<std::pair<double, std::string>> failures;
    const SpectrumPoint* at_alpha(double alpha) const;
};

// Infimum of attainable Birkhoff averages: min over letters of tau
// (attained at the fixed point of that branch for locally constant tau).
double alpha_min(const System& sys);

struct SolveOptions {
    double tolerance = 1e-9;
    int max_iters = 60;
    EngineOptions engine;
};

// Damped Newton on (p, dp/dq) with the exact Jacobian from Gibbs moments.
SpectrumPoint solve_point(const System& sys, double alpha, double q0, double b0,
                          const SolveOptions& opt = {});

// Continuation along a geometric alpha grid: tangent predictor b' = q/lambda,
// q extrapolated on log-log scale. Per-point failures are recorded, never fatal.
SpectrumCurve solve_curve(const System& sys, const std::vector<double>& grid,
                          const SolveOptions& opt = {});

// Max relative discrepancy between finite-difference b'(alpha) and q(alpha)/lambda.
double check_derivative_identity(const SpectrumCurve& curve);

// min over a log-spaced q-grid of p(alpha, q, b_alpha); also reports the
// most negative sampled value (for the nonnegativity invariant).
struct QScan {
    double min_value = 0;
    double argmin_q = 0;
    double most_negative = 0;
};
QScan q_scan(const System& sys, double alpha, double b_alpha, double q_lo, double q_hi,
             int samples, const EngineOptions& opt = {});

}  // namespace birkhoff
