#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "birkhoff/systems.hpp"

namespace birkhoff {

// Potential q(alpha - tau) - b log|F'|. Letter weight: count * exp(-q tau - b logd);
// the pressure value carries the q*alpha shift.
struct Potential {
    double alpha = 0;
    double q = 0;
    double b = 0;
};

struct PressureEstimate {
    double lower = 0, upper = 0, value = 0;
    std::uint64_t truncation_N = 0;
    int depth_n = 1;
    double tail_bound = 0;  // omitted-alphabet mass bound
    double width() const { return upper - lower; }
};

struct EngineOptions {
    std::uint64_t n_direct = 20000;
    std::uint64_t truncation_cap = 20000000;
    double quad_rel = 1e-14;
};

// Depth-1 moment data for a locally constant potential (exact for constant
// slope systems; gauss uses the transfer-operator path instead).
struct Moments {
    long double z = 0;            // sum of letter weights
    double pressure = 0;          // q*alpha + log z
    double dp_dq = 0;             // alpha - E[tau]
    double lyapunov = 0;          // E[logd]
    double var_tau = 0;           // Var(tau) = d2p/dq2
    double cov_tau_logd = 0;      // Cov(tau, logd) = d2p/(db dq)
    double var_logd = 0;
    bool tau_moment_divergent = false;  // q = 0 with a non-integrable tau
    PressureEstimate estimate;
};

Moments compute_moments(const System& sys, const Potential& pot, const EngineOptions& opt = {});

struct Finiteness {
    enum class Verdict { Finite, Infinite, Undetermined };
    Verdict verdict = Verdict::Undetermined;
    std::string witness;
    double exponent = 0;  // extrapolated tail exponent of the letter weights
};

Finiteness finiteness_check(const System& sys, const Potential& pot);

// Pressure of a potential constant on 1-cylinders: log of the letter-weight sum
// with an Euler-Maclaurin tail; adapts the truncation until the rigorous
// sandwich is narrower than tol.
PressureEstimate pressure_locally_constant(const System& sys, const Potential& pot, double tol,
                                           EngineOptions opt = {});

struct GibbsMeasure {
    std::vector<std::pair<std::uint64_t, double>> letter_weights;  // grouped letters
    double normalization_defect = 0;
    double entropy = 0;
    double lyapunov = 0;
    double mean_tau = 0;
    bool mean_tau_infinite = false;
    double var_tau = 0;
    double cov_tau_logf = 0;
    double gibbs_constant_estimate = 1;
    PressureEstimate pressure;
};

GibbsMeasure gibbs_weights(const System& sys, const Potential& pot, std::uint64_t N,
                           EngineOptions opt = {});

// (dP/dq, dP/db) = (-mean_tau + alpha-shift handling, -lyapunov).
std::pair<double, double> pressure_gradient(const System& sys, const Potential& pot,
                                            EngineOptions opt = {});

struct BowenResult {
    double value = 0, lower = 0, upper = 0;
    double residual = 0;  // |P(-b* log|F'|)|
    std::uint64_t truncation_N = 0;
    int depth_n = 1;
};

// Root of b -> P(-b log|F'|): bracketed bisection refined by safeguarded
// Newton using dP/db = -lyapunov. Gauss routes through the transfer-operator
// bounds (see gauss_operator.hpp).
BowenResult bowen_dimension(const System& sys, double tol, int depth = 2,
                            std::uint64_t truncation = 0, EngineOptions opt = {});

}  // namespace birkhoff
