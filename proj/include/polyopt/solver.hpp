#pragma once

#include <string>
#include <vector>

#include "polyopt/conic_program.hpp"

namespace polyopt {

enum class SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasibleOrUnbounded,
    IterationLimit,
    NumericalError,
};

std::string status_name(SolveStatus s);

struct SolveOptions {
    double tol = 1e-8;
    /// On a stall or the iteration cap, the best iterate still counts as
    /// Optimal when its worst residual is within this looser tolerance.
    double accept_tol = 1e-8;
    int max_iter = 200;
    bool verbose = false;
};

struct ResidualReport {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double max() const { return std::max(primal, std::max(dual, gap)); }
};

/// Solver output. x/y/z live in the original program's variable/row space and
/// satisfy the KKT conventions of the minimization form (a maximize program
/// is solved as min of the negated objective):
///   A x = b, x in K;  A'y + z = c~;  z in K*.
/// For PSD blocks z packs the raw pairing convention: z[Q_ij], i < j, holds
/// 2 Z_ij, so dot(x, z) is the true cone inner product.
/// For the infeasible statuses x/y/z instead hold the normalized certificate:
///   PrimalInfeasible:  A'y + z = 0, z in K*, b'y = 1;
///   DualInfeasibleOrUnbounded:  A x = 0, x in K, c~'x = -1.
struct Solution {
    SolveStatus status = SolveStatus::NumericalError;
    double objective = 0.0;  // user sense, includes the program's constant term
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
    ResidualReport residuals;
    int iterations = 0;
    std::string message;
};

Solution solve(const ConicProgram& cp, const SolveOptions& opts = {});

/// Recomputes residuals from scratch against the original program data
/// (independent of solver internals): primal = ||Ax - b||_inf, dual =
/// ||c~ - A'y - z||_inf plus the K* violation of z, gap = |x . z|.
ResidualReport compute_residuals(const ConicProgram& cp, const Solution& sol);

}  // namespace polyopt
