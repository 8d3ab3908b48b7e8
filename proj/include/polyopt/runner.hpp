#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyopt/certificates.hpp"
#include "polyopt/hierarchy.hpp"
#include "polyopt/solver.hpp"

namespace polyopt {

struct RunResult {
    std::string instance;
    Family family = Family::PO;
    GramCone cone = GramCone::Sos;
    int r = 0;
    int dhat = 0;
    SolveStatus status = SolveStatus::NumericalError;
    std::optional<double> bound;  // present iff status == Optimal
    double build_seconds = 0.0;
    double solve_seconds = 0.0;
    bool verified = false;
    double verify_residual = 0.0;
    std::string verify_note;
    std::string error;

    std::string to_json() const;
};

struct RunOptions {
    SolveOptions solver;
    double verify_tol = 1e-6;
    bool verify = true;
};

RunResult run(const PopInstance& inst, const HierarchySpec& spec, const RunOptions& opts = {});

std::vector<RunResult> sweep(const PopInstance& inst, Family family, GramCone cone, int r_min,
                             int r_max, const RunOptions& opts = {});

/// The fixed column order of the comparison table.
extern const std::vector<HierarchySpec> kCompareColumns;  // r filled in per row

/// One row per dhat in {d, d+step, ... <= dhat_max} where a level exists for
/// the family; columns in the fixed order QM-SOS, QM-SDSOS, QM-DSOS, Po-SOS,
/// Po-SDSOS, Po-DSOS. Per-cell failures are recorded, not thrown.
std::vector<std::vector<RunResult>> compare(const PopInstance& inst, int dhat_max,
                                            const RunOptions& opts = {});

std::string format_table(const PopInstance& inst, const std::vector<std::vector<RunResult>>& rows);

}  // namespace polyopt
