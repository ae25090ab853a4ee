#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace birkhoff {

// Neumaier compensated accumulator. Summation order is the caller's
// responsibility; with a fixed order results are bit-reproducible.
template <typename T = long double>
class CompensatedSum {
  public:
    void add(T v) {
        const T t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            carry_ += (sum_ - t) + v;
        else
            carry_ += (v - t) + sum_;
        sum_ = t;
    }
    void add(const CompensatedSum& o) {
        add(o.sum_);
        carry_ += o.carry_;
    }
    T value() const { return sum_ + carry_; }

  private:
    T sum_ = 0, carry_ = 0;
};

// Number of worker threads used by chunked reductions. Chunk boundaries and
// the combine order are fixed, so results do not depend on this value.
void set_worker_count(int n);
int worker_count();

// Deterministic chunked parallel reduction of f(i) over [begin, end).
// f must be pure. Chunks of fixed size are summed independently (Neumaier,
// long double) and combined in index order.
long double deterministic_sum(std::uint64_t begin, std::uint64_t end,
                              const std::function<long double(std::uint64_t)>& f);

// Same, but f writes one term per moment slot (fused multi-moment pass).
void deterministic_sum_multi(std::uint64_t begin, std::uint64_t end, int nslots,
                             const std::function<void(std::uint64_t, long double*)>& f,
                             long double* out);

struct QuadratureResult {
    long double value = 0;
    long double error = 0;  // estimated
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod 15(7) on a finite interval.
QuadratureResult integrate_gk(const std::function<long double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol);

// Integral over [x0, infinity) of a smooth decaying f, via u = log x plus a
// power-law remainder once the logarithmic derivative has stabilised.
// `log_decay_exponent` is consulted at probe points: if the local exponent
// p = x f'/f never drops below -1 the integral is flagged divergent.
struct TailIntegral {
    long double value = 0;
    long double error = 0;
    bool divergent = false;
    double exponent_probe = 0;  // local power p at the far probe
};
TailIntegral integrate_tail(const std::function<long double(double)>& f, double x0,
                            double rel_tol);

struct EulerMaclaurinTail {
    long double value = 0;       // sum over n >= n0 of f(n)
    long double error = 0;       // size of the first omitted correction + quadrature error
    long double bound_lo = 0;    // rigorous bounds when shape permits, else widened
    long double bound_hi = 0;
    bool divergent = false;
    const char* shape = "";      // "convex", "monotone", "unimodal"
};

// Sum over n >= n0 of a smooth f, as integral + f/2 - f'/12 + f'''/720 with
// derivatives by central differences at unit step. Bounds use the midpoint
// rule for convex decreasing f, integral comparison for merely decreasing f,
// and a peak-width correction for unimodal f.
EulerMaclaurinTail tail_sum(const std::function<long double(double)>& f, double n0,
                            double rel_tol);

// --- root finding -----------------------------------------------------------

// Bisection on [a,b] assuming fa = f(a), fb = f(b) have opposite signs.
// +inf / -inf function values are honoured (divergence counts as its sign).
double bisect(const std::function<double(double)>& f, double a, double b, double fa, double fb,
              double xtol, int max_iter = 200);

// Newton with the bracket as trust region; falls back to bisection steps.
double newton_bracketed(const std::function<void(double, double&, double&)>& f_df, double a,
                        double b, double x0, double ftol, int max_iter = 100);

// Golden-section minimisation of a unimodal function on [a,b].
double golden_min(const std::function<double(double)>& f, double a, double b, double xtol);

// --- statistics --------------------------------------------------------------

struct LineFit {
    double slope = 0, intercept = 0;
    double stderr_slope = 0;
    double max_abs_residual = 0;
    int n = 0;
};

// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Geometric grid lo * (hi/lo)^(i/(count-1)), i = 0..count-1.
std::vector<double> geometric_grid(double lo, double hi, int count);

}  // namespace birkhoff
