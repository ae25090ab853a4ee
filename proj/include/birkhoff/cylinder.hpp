#pragma once

#include <cstdint>
#include <vector>

#include "birkhoff/pressure.hpp"
#include "birkhoff/systems.hpp"

namespace birkhoff {

struct CylinderBounds {
    double inf_sum = 0, sup_sum = 0;  // bounds on S_n log|F'| over the cylinder
};

// Birkhoff sum of log|F'| over the cylinder of a finite word. Constant-slope
// systems give inf == sup; for gauss the continuant endpoints are exact.
CylinderBounds cylinder_derivative_bounds(const System& sys,
                                          const std::vector<std::uint64_t>& word);

// (1/n) log sum over length-n words (letters <= N) of exp(inf/sup S_n psi),
// with the omitted-alphabet bound folded into the upper end.
PressureEstimate pressure_cylinder_sandwich(const System& sys, const Potential& pot, int depth,
                                            std::uint64_t truncation,
                                            std::uint64_t word_cap = 30000000);

// Estimates for depths 1..max_depth with the best-so-far envelope applied,
// used to report monotone improvement.
std::vector<PressureEstimate> cylinder_sandwich_sequence(const System& sys, const Potential& pot,
                                                         int max_depth,
                                                         std::uint64_t truncation);

}  // namespace birkhoff
