#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace birkhoff {

struct Interval {
    double lo = 0, hi = 0;
    double length() const { return hi - lo; }
};

struct ConstantSlope {
    double value;  // > 1
};

// |F'| varies over the branch; endpoints give inf/sup when monotone.
struct AnalyticDeriv {
    std::function<double(double)> abs_deriv;
    double inf_deriv = 0, sup_deriv = 0;
    double distortion = 1;  // sup/inf
};

using DerivativeModel = std::variant<ConstantSlope, AnalyticDeriv>;

struct Branch {
    std::uint64_t index = 0;
    Interval interval;
    DerivativeModel deriv;
    double tau = 0;
};

struct ScaleFunction {
    enum class Kind { Polynomial, Exponential };
    Kind kind = Kind::Polynomial;
    double exponent = 1;     // omega(x) = x^k or e^{k x}
    double ratio_bound = 2;  // sup_n omega(n+1)/omega(n)
    double operator()(double x) const;
    double derivative(double x) const;
    double inverse(double w) const;
};

struct TailModel {
    double beta = 0;             // mu(tau > n) ~ n^{-beta}
    double beta1 = 0, beta2 = 0; // exponents in the equilibrium-ratio sandwich
    double ell_lo = 1, ell_hi = 1;
};

// Per-letter summation data. For shell-graded families (linear_count,
// linear_exp) a "letter" is one shell of identical branches and count > 1;
// everywhere else count == 1. log_count is the overflow-safe form engines use
// (counts grow like 2^n for linear_exp).
struct Term {
    double tau = 0;
    double logd = 0;   // log of the branch slope (representative for gauss)
    double count = 1;
    double log_count = 0;
    Term() = default;
    Term(double t, double ld, double c)
        : tau(t), logd(ld), count(c), log_count(std::log(c)) {}
    Term(double t, double ld, double c, double lc) : tau(t), logd(ld), count(c), log_count(lc) {}
};

// Smooth continuation of Term beyond model_start; authoritative there, so
// truncated sums plus Euler-Maclaurin tails are consistent at any cut.
struct SmoothTail {
    bool usable = false;
    double model_start = 1;
    std::function<Term(double)> eval;
};

struct SystemDescriptor {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    std::string to_text() const;
};

enum class Family { Lueroth, Gauss, LinearPoly, LinearCount, LinearExp, MpInduced, Custom };

struct System {
    SystemDescriptor desc;
    Family family = Family::Custom;
    Interval image{0, 1};
    double expansion_constant = 1;  // A with |F'| > A (per expansion_iterate steps)
    int expansion_iterate = 1;      // 2 for gauss: (F2) holds for the second iterate
    bool constant_slope = true;
    bool finite = false;
    std::uint64_t alphabet_size = 0;  // letters (grouped) when finite
    double known_b_star = 0;          // 0 = unknown
    double alpha_min = 0;             // min over letters of tau

    ScaleFunction scale;
    TailModel tail_model;

    std::function<Term(std::uint64_t)> term;      // letters indexed from 1
    std::function<Branch(std::uint64_t)> branch;  // per-branch geometry, indexed from 1
    SmoothTail smooth;

    bool has_mu_closed_form = false;
    std::function<double(std::uint64_t)> mu_letter;    // measure of ONE branch in group a
    std::function<double(double)> mu_tau_exceeds;      // mu(tau > t)

    Term smooth_or_term(double x) const;  // model for x >= model_start, else term(round(x))
};

// --- builders -------------------------------------------------------------------

System make_lueroth(int r);
System make_gauss(int r);
System make_linear_poly(double r, double s);
System make_linear_count(double a, double b, double c);
System make_linear_exp(double beta);
System make_mp_induced(double lambda);

// Explicit finite constant-slope system from branch lengths (stacked on [0,1])
// and per-branch tau values.
System make_finite_linear(const std::vector<double>& lengths, const std::vector<double>& taus);

// Finite restriction to the first N letters (weights untouched).
System truncate_system(const System& sys, std::uint64_t N);

// Named dispatch used by the CLI: name in {lueroth, gauss, linear_poly,
// linear_count, linear_exp, mp_induced}. Throws ParamError naming the
// violated constraint.
System build_builtin(const std::string& name, const std::map<std::string, double>& params);
System parse_system_text(const std::string& text);

// --- Manneville-Pomeau specifics --------------------------------------------------

// True induced-map branch table: branch with return time n, endpoints from the
// backward orbit of 1/2 under the left branch, derivative by the chain rule.
std::vector<Branch> mp_branch_table(double lambda, std::uint64_t N);

// Backward orbit y_0 = 1, y_1 = 1/2, f_left(y_{k+1}) = y_k.
std::vector<double> mp_backward_orbit(double lambda, std::uint64_t N);

}  // namespace birkhoff
