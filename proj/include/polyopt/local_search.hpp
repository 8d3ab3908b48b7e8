#pragma once

#include <cstdint>

#include "polyopt/pop.hpp"

namespace polyopt {

/// Independent upper-bound oracle for the ball-shell instances: multistart
/// projected gradient descent over {x >= 0, 0.36 <= |x|^2 <= 1}. Returns the
/// best objective value found. Deterministic per (instance, seed).
double ball_upper_bound(const PopInstance& inst, int starts = 200, std::uint64_t seed = 1);

}  // namespace polyopt
