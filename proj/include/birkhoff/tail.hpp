#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "birkhoff/numerics.hpp"
#include "birkhoff/pressure.hpp"
#include "birkhoff/systems.hpp"

namespace birkhoff {

struct ShellStats {
    std::uint64_t n = 0;
    double omega_lo = 0, omega_hi = 0;
    double count = 0;     // branches with inf tau in [omega(n), omega(n+1))
    double measure = 0;   // geometric measure of their union
};

// Counts and measures per omega-shell. The geometric measure comes from the
// closed form when available, otherwise from Gibbs weights at (0, b*).
std::vector<ShellStats> shell_census(const System& sys, int n_shells);

// Smallest C with count(n) <= C e^{eps omega(n)} over the probed range (H1).
double h1_smallest_constant(const System& sys, double eps, int n_shells);

struct TailExponentFit {
    double beta_hat = 0;
    double stderr_slope = 0;
    int points = 0;
    LineFit fit;
};

// Least-squares slope of log mu(tau > t) against log t on a geometric grid
// t = 2^k up to t_max.
TailExponentFit estimate_tail_exponent(const System& sys, double t_max);

struct H3Row {
    std::uint64_t shell = 0;
    double ratio = 0;        // mu(shell) / mu_{q,b}(shell)
    double lower = 0, upper = 0;  // fitted-constant sandwich bounds
};

struct H3Report {
    std::vector<H3Row> rows;
    double c1 = 1, c2 = 1;   // fitted comparability constants (shells 5..N)
    bool sandwich_holds = true;
    std::string diagnostic;
};

H3Report h3_ratio_probe(const System& sys, double q, double b, int n_shells,
                        EngineOptions opt = {});

struct BranchCountCheck {
    double fit_lo = 0, fit_hi = 0;  // count / (omega'(n) omega(n)^{c_i - 1}) extremes
    bool applies = false;           // polynomial omega only
};

// Branch-count comparability against omega'(n) omega(n)^{c-1} with
// c_{1,2} = beta_{1,2} b* - beta.
BranchCountCheck branch_count_bounds(const System& sys, int n_shells);

}  // namespace birkhoff
