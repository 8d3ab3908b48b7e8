#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyopt/polynomial.hpp"

namespace polyopt {

/// A polynomial optimization problem: minimize f(x) subject to g_i(x) >= 0
/// and the per-variable nonnegativity flags.
struct PopInstance {
    std::string name;
    std::size_t n = 0;
    Polynomial objective;
    std::vector<Polynomial> constraints;
    std::vector<bool> nonneg;
    std::optional<double> known_optimum;

    /// Degree of the program: max(deg f, deg g_1, ..., deg g_m).
    int degree() const {
        int d = objective.degree();
        for (const auto& g : constraints) d = std::max(d, g.degree());
        return std::max(d, 1);
    }

    int max_constraint_degree() const {
        int d = 0;
        for (const auto& g : constraints) d = std::max(d, g.degree());
        return d;
    }

    bool all_nonneg() const {
        for (bool b : nonneg)
            if (!b) return false;
        return true;
    }
};

}  // namespace polyopt
