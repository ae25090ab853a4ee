#pragma once

#include <cstdint>
#include <vector>

#include "birkhoff/pressure.hpp"
#include "birkhoff/systems.hpp"

namespace birkhoff {

// Function on [0,1] sampled at Chebyshev points of the second kind,
// evaluated by barycentric interpolation.
class ChebFun {
  public:
    explicit ChebFun(int degree = 32);
    static const std::vector<double>& nodes(int degree);
    double eval(double x) const;
    std::vector<double> values;  // at nodes(degree)
    int degree() const { return (int)values.size() - 1; }
    double min_value() const;
    double max_value() const;
    double max_abs_slope() const;  // sampled bound, widened
};

// Ruelle operator for the Gauss system with potential -q tau - b log|F'|:
// (Lf)(x) = sum_a e^{-q a^r} (a+x)^{-2b} f(1/(a+x)).
struct GaussRuelleOp {
    double r = 2;  // tau_a = a^r
    double q = 0, b = 1;
    std::uint64_t truncation = 20000;  // direct letters; Euler-Maclaurin beyond when enabled
    bool include_tail = true;

    double row_sum(double x, const ChebFun& f) const;             // (L f)(x)
    double row_sum_weighted(double x, const ChebFun& f, int tau_pow, int logd_pow) const;
    double tail_sup_bound() const;  // upper bound on sum_{a>N} e^{-q a^r} a^{-2b}
};

struct GaussEigen {
    double log_lambda = 0;       // midpoint estimate of P(-q tau - b log|F'|)
    double lower = 0, upper = 0; // certified Collatz-Wielandt bounds
    ChebFun h;                   // positive eigenfunction approximation
    int iterations = 0;
};

GaussEigen gauss_eigen(const GaussRuelleOp& op, int power_iters = 48, int cw_grid = 1024);

// Moments of the equilibrium measure via iterated smooth seeds h*g.
Moments gauss_moments(const System& sys, const Potential& pot, const EngineOptions& opt);

BowenResult gauss_bowen_dimension(const System& sys, double tol, int depth,
                                  std::uint64_t truncation);

GibbsMeasure gauss_gibbs_weights(const System& sys, const Potential& pot, std::uint64_t N,
                                 const EngineOptions& opt);

std::pair<double, double> gauss_pressure_gradient(const System& sys, const Potential& pot,
                                                  const EngineOptions& opt);

}  // namespace birkhoff
