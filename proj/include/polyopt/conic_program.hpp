#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace polyopt {

/// One sparse linear equality row: sum coeff[k] * v[index[k]] = rhs.
struct LinearRow {
    std::vector<std::int32_t> index;
    std::vector<double> coeff;
    double rhs = 0.0;

    void add(std::int32_t var, double c) {
        index.push_back(var);
        coeff.push_back(c);
    }
};

struct NonnegCone {
    std::vector<std::int32_t> vars;
};

/// (t, u...) with t >= ||u||_2.
struct LorentzCone {
    std::vector<std::int32_t> vars;
};

/// Upper-triangle packing of a symmetric k x k matrix, row-major:
/// vars[idx(i,j)] = Q_ij for i <= j, idx(i,j) = i*k - i*(i-1)/2 + (j-i).
/// The variable holds the raw matrix entry (off-diagonals are not scaled).
struct PsdCone {
    std::int32_t size = 0;
    std::vector<std::int32_t> vars;
};

using ConeBlock = std::variant<NonnegCone, LorentzCone, PsdCone>;

/// Conic program in equality standard form:
///   optimize  objective . v  (+ objective_constant)
///   s.t.      rows (A v = b),  cone blocks on disjoint variable sets.
/// Variables not covered by any cone block are free.
struct ConicProgram {
    std::int32_t num_vars = 0;
    bool maximize = true;
    std::vector<std::int32_t> objective_index;
    std::vector<double> objective_coeff;
    double objective_constant = 0.0;
    std::vector<LinearRow> rows;
    std::vector<ConeBlock> cones;

    std::int32_t new_var() { return num_vars++; }
    std::vector<std::int32_t> new_vars(std::int32_t count) {
        std::vector<std::int32_t> out(count);
        for (auto& v : out) v = num_vars++;
        return out;
    }
    void set_objective_term(std::int32_t var, double c) {
        objective_index.push_back(var);
        objective_coeff.push_back(c);
    }

    static std::size_t tri_index(std::int32_t k, std::int32_t i, std::int32_t j) {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(i) * k - static_cast<std::size_t>(i) * (i - 1) / 2 +
               (j - i);
    }

    /// Structural checks: cone blocks disjoint, indices in range, PSD blocks
    /// carry k(k+1)/2 variables. Throws std::invalid_argument on violation.
    void validate() const;
};

}  // namespace polyopt
