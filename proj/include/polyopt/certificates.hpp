#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "polyopt/hierarchy.hpp"
#include "polyopt/solver.hpp"

namespace polyopt {

struct StatusNotOptimal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One decoded multiplier: its Gram matrix, the polynomial it expands to,
/// and (for SDD blocks) the 2x2 pair blocks the encoding produced.
struct DecodedMultiplier {
    GramCone cone = GramCone::Scalar;
    Polynomial carrier;
    std::vector<Monomial> basis;
    Eigen::MatrixXd gram;
    PolynomialD value;
    std::vector<Eigen::Matrix2d> sdd_blocks;
    CarrierIndex index;
    int constraint_index = -1;
};

struct Certificate {
    HierarchySpec spec;
    double lambda = 0.0;
    Polynomial lhs_base;
    std::vector<DecodedMultiplier> multipliers;
};

/// Extracts lambda and every multiplier Gram from an Optimal solution.
Certificate decode(const Solution& sol, const DecoderMap& dm);

struct VerifyReport {
    double identity_residual = 0.0;
    std::vector<std::string> cone_violations;
    bool pass = false;
    std::string to_json() const;
};

/// Recomputes the matched identity lhs_base*(f - lambda) - sum p * carrier
/// coefficient-wise through polynomial arithmetic (never via solver
/// residuals) and checks every Gram's cone membership. pass requires
/// identity_residual <= tol * (1 + ||f||_inf) and no cone violation.
VerifyReport verify(const PopInstance& inst, const Certificate& cert, double tol = 1e-6);

struct ChainReport {
    int r = 0;
    // bounds in hierarchy order: LP, DSOS, SDSOS, SOS
    std::vector<double> bounds;
    std::vector<SolveStatus> statuses;
    std::optional<double> known_optimum;
    bool ordered(double tol = 1e-6) const;
    bool below_optimum(double tol = 1e-6) const;
};

/// Solves the four PO programs at level r and reports the bound chain
/// z_LP <= z_DSOS <= z_SDSOS <= z_SOS (infeasible members count as -inf).
ChainReport chain_check(const PopInstance& inst, int r, const SolveOptions& opts = {});

}  // namespace polyopt
