#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constructor / configuration parameter violates a stated constraint.
struct ParamError : Error {
    using Error::Error;
};

// Quantity is infinite or outside the finiteness domain.
struct DomainError : Error {
    using Error::Error;
};

// Iteration failed to reach the requested tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

// Requested tolerance unreachable at the truncation cap; carries what was achieved.
struct ToleranceError : Error {
    double achieved_lower, achieved_upper;
    ToleranceError(const std::string& msg, double lo, double hi)
        : Error(msg), achieved_lower(lo), achieved_upper(hi) {}
};

// Work-size guard tripped (word count, truncation cap).
struct CapacityError : Error {
    using Error::Error;
};

}  // namespace birkhoff
