#include "polyopt/runner.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace polyopt {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

std::string RunResult::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"instance\":\"" << instance << "\",\"family\":\"" << family_name(family)
       << "\",\"cone\":\""
       << (cone == GramCone::Scalar ? std::string("lp") : gram_cone_name(cone)) << "\",\"r\":" << r
       << ",\"dhat\":" << dhat << ",\"status\":\"" << status_name(status) << "\"";
    if (bound) os << ",\"bound\":" << *bound;
    os << ",\"build_s\":" << build_seconds << ",\"solve_s\":" << solve_seconds;
    os << ",\"verify_pass\":" << (verified ? "true" : "false");
    os << ",\"verify_residual\":" << verify_residual;
    if (!error.empty()) os << ",\"error\":\"" << error << "\"";
    os << "}";
    return os.str();
}

RunResult run(const PopInstance& inst, const HierarchySpec& spec, const RunOptions& opts) {
    RunResult rr;
    rr.instance = inst.name;
    rr.family = spec.family;
    rr.cone = spec.cone;
    rr.r = spec.r;
    try {
        rr.dhat = dhat(inst, spec);
        auto t0 = std::chrono::steady_clock::now();
        BuildResult build = build_hierarchy(inst, spec);
        rr.build_seconds = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        // aim at the strict tolerance; accept a stalled best iterate at the
        // verification tolerance (degenerate Gram optima floor slightly above
        // the strict target)
        SolveOptions sopts = opts.solver;
        sopts.accept_tol = std::max(sopts.accept_tol, 10.0 * opts.verify_tol);
        Solution sol = solve(build.program, sopts);
        rr.solve_seconds = seconds_since(t0);
        rr.status = sol.status;
        if (sol.status == SolveStatus::Optimal) {
            rr.bound = sol.objective;
            if (opts.verify) {
                Certificate cert = decode(sol, build.decoder);
                VerifyReport rep = verify(inst, cert, opts.verify_tol);
                rr.verified = rep.pass;
                rr.verify_residual = rep.identity_residual;
                if (!rep.cone_violations.empty()) rr.verify_note = rep.cone_violations.front();
            }
        }
    } catch (const std::exception& e) {
        rr.error = e.what();
        rr.status = SolveStatus::NumericalError;
    }
    return rr;
}

std::vector<RunResult> sweep(const PopInstance& inst, Family family, GramCone cone, int r_min,
                             int r_max, const RunOptions& opts) {
    std::vector<RunResult> out;
    for (int r = r_min; r <= r_max; ++r)
        out.push_back(run(inst, HierarchySpec{family, cone, r}, opts));
    return out;
}

const std::vector<HierarchySpec> kCompareColumns = {
    {Family::QM, GramCone::Sos, 0},   {Family::QM, GramCone::Sdsos, 0},
    {Family::QM, GramCone::Dsos, 0},  {Family::PO, GramCone::Sos, 0},
    {Family::PO, GramCone::Sdsos, 0}, {Family::PO, GramCone::Dsos, 0},
};

std::vector<std::vector<RunResult>> compare(const PopInstance& inst, int dhat_max,
                                            const RunOptions& opts) {
    std::vector<std::vector<RunResult>> rows;
    const int d = inst.degree();
    for (int dh = 2; dh <= dhat_max; dh += 2) {
        if (dh < d) continue;
        std::vector<RunResult> row;
        for (HierarchySpec spec : kCompareColumns) {
            RunResult rr;
            try {
                spec.r = level_for_dhat(inst, spec.family, dh);
                rr = run(inst, spec, opts);
            } catch (const std::exception& e) {
                rr.instance = inst.name;
                rr.family = spec.family;
                rr.cone = spec.cone;
                rr.dhat = dh;
                rr.error = e.what();
            }
            row.push_back(std::move(rr));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_table(const PopInstance& inst, const std::vector<std::vector<RunResult>>& rows) {
    std::ostringstream os;
    os << "instance " << inst.name << "\n";
    os << std::setw(6) << "dhat";
    const char* names[6] = {"qm-sos", "qm-sdsos", "qm-dsos", "po-sos", "po-sdsos", "po-dsos"};
    for (const char* n : names) os << std::setw(12) << n << std::setw(9) << "T";
    os << "\n";
    for (const auto& row : rows) {
        os << std::setw(6) << (row.empty() ? 0 : row[0].dhat);
        for (const auto& rr : row) {
            std::ostringstream cell;
            if (rr.bound) {
                cell << std::fixed << std::setprecision(2) << *rr.bound;
            } else if (rr.status == SolveStatus::PrimalInfeasible) {
                cell << "Infeas.";
            } else if (!rr.error.empty()) {
                cell << "err";
            } else {
                cell << status_name(rr.status);
            }
            std::ostringstream tcell;
            tcell << std::fixed << std::setprecision(2) << rr.solve_seconds;
            os << std::setw(12) << cell.str() << std::setw(9) << tcell.str();
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace polyopt
