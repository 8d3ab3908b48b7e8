#include "polyopt/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "polyopt/kernels.hpp"
#include "solver_internal.hpp"

namespace polyopt {

using detail::MatrixXd;
using detail::NTScaling;
using detail::PresolveResult;
using detail::StdForm;
using detail::VectorXd;

std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
        case SolveStatus::DualInfeasibleOrUnbounded: return "DualInfeasibleOrUnbounded";
        case SolveStatus::IterationLimit: return "IterationLimit";
        case SolveStatus::NumericalError: return "NumericalError";
    }
    return "?";
}

namespace {

constexpr double kStep = 0.99;

struct KktSolver {
    const StdForm& sf;
    MatrixXd m;       // Schur complement over cone columns (upper triangle filled)
    MatrixXd free_cols;  // dense copy of A_f (p x nf)
    Eigen::LLT<MatrixXd> llt;
    MatrixXd f;          // M^{-1} A_f
    Eigen::LDLT<MatrixXd> corner;  // A_f' M^{-1} A_f
    Eigen::LDLT<MatrixXd> gram_aat;  // A A' (factored once, for primal row repair)
    bool ok = false;

    explicit KktSolver(const StdForm& sf_) : sf(sf_) {
        free_cols = MatrixXd::Zero(sf.p, sf.num_free);
        for (std::int32_t j = 0; j < sf.num_free; ++j)
            for (std::size_t k = 0; k < sf.cols[j].row.size(); ++k)
                free_cols(sf.cols[j].row[k], j) = sf.cols[j].val[k];
        MatrixXd aat = MatrixXd::Zero(sf.p, sf.p);
        for (const auto& col : sf.cols)
            for (std::size_t a = 0; a < col.row.size(); ++a)
                for (std::size_t b = 0; b < col.row.size(); ++b)
                    aat(col.row[a], col.row[b]) += col.val[a] * col.val[b];
        aat.diagonal().array() += 1e-12;
        gram_aat.compute(aat);
    }

    bool factor(const NTScaling& nt) {
        m = MatrixXd::Zero(sf.p, sf.p);
        nt.accumulate_schur(sf.cols, m);
        m.triangularView<Eigen::StrictlyLower>() = m.transpose();
        ok = false;
        for (double reg : {1e-9, 1e-7}) {
            MatrixXd reg_m = m + reg * MatrixXd::Identity(sf.p, sf.p);
            llt.compute(reg_m);
            if (llt.info() == Eigen::Success) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
        if (sf.num_free > 0) {
            f = llt.solve(free_cols);
            MatrixXd s = free_cols.transpose() * f;
            corner.compute(0.5 * (s + s.transpose()));
            if (corner.info() != Eigen::Success) return ok = false, false;
        }
        return true;
    }

    void base_solve(const VectorXd& r1, const VectorXd& r2, VectorXd& y, VectorXd& xf) const {
        VectorXd my = llt.solve(r1);
        if (sf.num_free > 0) {
            xf = corner.solve(free_cols.transpose() * my - r2);
            y = my - f * xf;
        } else {
            xf.resize(0);
            y = my;
        }
    }

    // solves [M Af; Af' 0] [y; xf] = [r1; r2] with iterative refinement
    // against the unregularized matrix
    void solve_aug(const VectorXd& r1, const VectorXd& r2, VectorXd& y, VectorXd& xf) const {
        base_solve(r1, r2, y, xf);
        double scale = 1.0 + r1.norm() + r2.norm();
        double prev = std::numeric_limits<double>::infinity();
        for (int round = 0; round < 5; ++round) {
            VectorXd res1 = r1 - m.selfadjointView<Eigen::Upper>() * y;
            VectorXd res2;
            if (sf.num_free > 0) {
                res1 -= free_cols * xf;
                res2 = r2 - free_cols.transpose() * y;
            } else {
                res2.resize(0);
            }
            double rn = res1.norm() + (sf.num_free ? res2.norm() : 0.0);
            if (rn <= 1e-13 * scale || rn >= 0.5 * prev) break;
            prev = rn;
            VectorXd dy, dxf;
            base_solve(res1, res2, dy, dxf);
            y += dy;
            if (sf.num_free > 0) xf += dxf;
        }
    }
};

struct Iterate {
    VectorXd x;  // size n (free + cone)
    VectorXd y;  // size p
    VectorXd z;  // size cone_dim
    double tau = 1.0;
    double kappa = 1.0;
};

VectorXd mat_vec(const StdForm& sf, const VectorXd& x) {
    const auto& krn = kernels::ops();
    VectorXd out = VectorXd::Zero(sf.p);
    for (std::int32_t j = 0; j < sf.n; ++j)
        krn.scatter_axpy(x[j], sf.cols[j].row.data(), sf.cols[j].val.data(),
                         sf.cols[j].row.size(), out.data());
    return out;
}

VectorXd mat_t_vec(const StdForm& sf, const VectorXd& y) {
    VectorXd out = VectorXd::Zero(sf.n);
    for (std::int32_t j = 0; j < sf.n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < sf.cols[j].row.size(); ++k)
            s += sf.cols[j].val[k] * y[sf.cols[j].row[k]];
        out[j] = s;
    }
    return out;
}

struct Direction {
    VectorXd dx, dy, dz;
    double dtau = 0.0, dkappa = 0.0;
};

Solution finalize(const ConicProgram& cp, const PresolveResult& pr, SolveStatus status,
                  const VectorXd& x_int, const VectorXd& y_int, const VectorXd& z_cone,
                  int iters, const std::string& message) {
    const StdForm& sf = pr.form;
    Solution sol;
    sol.status = status;
    sol.iterations = iters;
    sol.message = message;
    bool homogeneous = status == SolveStatus::PrimalInfeasible ||
                       status == SolveStatus::DualInfeasibleOrUnbounded;
    VectorXd z_full = VectorXd::Zero(sf.n);
    z_full.tail(sf.cone_dim) = z_cone;
    detail::recover_primal(cp, pr, x_int, sol.x, homogeneous);
    detail::recover_duals(cp, pr, y_int, z_full, sol.y, sol.z, homogeneous);
    double sense = cp.maximize ? -1.0 : 1.0;
    if (status == SolveStatus::Optimal || status == SolveStatus::IterationLimit) {
        double cx = sf.c.dot(x_int) + sf.obj_offset;
        sol.objective = sense * cx + cp.objective_constant;
    }
    return sol;
}

}  // namespace

Solution solve(const ConicProgram& cp, const SolveOptions& opts) {
    PresolveResult pr = detail::presolve(cp);
    const StdForm& sf = pr.form;

    if (pr.trivially_unbounded) {
        Solution sol;
        sol.status = SolveStatus::DualInfeasibleOrUnbounded;
        sol.message = "free variable with objective and no constraints";
        sol.x.assign(cp.num_vars, 0.0);
        sol.y.assign(cp.rows.size(), 0.0);
        sol.z.assign(cp.num_vars, 0.0);
        return sol;
    }
    if (pr.trivially_infeasible) {
        // inconsistent equalities surfaced while pivoting; rerun the HSD loop
        // on the raw program (no eliminations) to produce a Farkas certificate
        ConicProgram raw = cp;
        bool any_elim = !pr.eliminations.empty();
        if (any_elim) {
            // pivoting hides the certificate; disable it by marking every free
            // variable as used in a dense phantom row is overkill -- instead
            // just solve with eliminations suppressed via a fresh presolve on
            // a program whose free vars are split into cone variables.
            ConicProgram split = cp;
            std::vector<char> in_cone(split.num_vars, 0);
            for (const auto& cone : split.cones) {
                if (const auto* nn = std::get_if<NonnegCone>(&cone))
                    for (auto v : nn->vars) in_cone[v] = 1;
                else if (const auto* lc = std::get_if<LorentzCone>(&cone))
                    for (auto v : lc->vars) in_cone[v] = 1;
                else if (const auto* pc = std::get_if<PsdCone>(&cone))
                    for (auto v : pc->vars) in_cone[v] = 1;
            }
            NonnegCone splits;
            std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
            for (std::int32_t v = 0; v < cp.num_vars; ++v) {
                if (in_cone[v]) continue;
                std::int32_t neg = split.new_var();
                pairs.emplace_back(v, neg);
                splits.vars.push_back(v);
                splits.vars.push_back(neg);
                for (auto& row : split.rows) {
                    const std::size_t nk = row.index.size();
                    for (std::size_t k = 0; k < nk; ++k)
                        if (row.index[k] == v) row.add(neg, -row.coeff[k]);
                }
                const std::size_t nobj = split.objective_index.size();
                for (std::size_t k = 0; k < nobj; ++k)
                    if (split.objective_index[k] == v)
                        split.set_objective_term(neg, -split.objective_coeff[k]);
            }
            if (!splits.vars.empty()) split.cones.push_back(std::move(splits));
            Solution inner = solve(split, opts);
            for (auto [v, neg] : pairs) {
                inner.x[v] -= inner.x[neg];
                inner.z[v] = 0.0;
            }
            inner.x.resize(cp.num_vars);
            inner.z.resize(cp.num_vars);
            return inner;
        }
        Solution sol;
        sol.status = SolveStatus::PrimalInfeasible;
        sol.message = "inconsistent equality rows";
        sol.x.assign(cp.num_vars, 0.0);
        sol.y.assign(cp.rows.size(), 0.0);
        sol.z.assign(cp.num_vars, 0.0);
        return sol;
    }

    // Empty cone: the problem is a linear system over free variables.
    if (sf.cone_dim == 0) {
        if (sf.p == 0) {
            VectorXd x0 = VectorXd::Zero(sf.n);
            return finalize(cp, pr, SolveStatus::Optimal, x0, VectorXd::Zero(0), VectorXd::Zero(0),
                            0, "no cone constraints");
        }
        // least squares solve of A_f x = b; optimality of the free part was
        // already established (c restricted to a consistent system)
        MatrixXd af = MatrixXd::Zero(sf.p, sf.num_free);
        for (std::int32_t j = 0; j < sf.num_free; ++j)
            for (std::size_t k = 0; k < sf.cols[j].row.size(); ++k)
                af(sf.cols[j].row[k], j) = sf.cols[j].val[k];
        VectorXd x0 = af.colPivHouseholderQr().solve(sf.b);
        if ((af * x0 - sf.b).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + sf.b.cwiseAbs().maxCoeff())) {
            Solution sol;
            sol.status = SolveStatus::PrimalInfeasible;
            sol.message = "inconsistent equality rows";
            sol.x.assign(cp.num_vars, 0.0);
            sol.y.assign(cp.rows.size(), 0.0);
            sol.z.assign(cp.num_vars, 0.0);
            return sol;
        }
        VectorXd y0 = af.transpose().colPivHouseholderQr().solve(sf.c.head(sf.num_free));
        return finalize(cp, pr, SolveStatus::Optimal, x0, y0, VectorXd::Zero(0), 0, "linear system");
    }

    NTScaling nt(sf);
    Iterate it;
    it.x = VectorXd::Zero(sf.n);
    it.y = VectorXd::Zero(sf.p);
    VectorXd cone_identity = nt.identity();
    it.x.tail(sf.cone_dim) = cone_identity;
    it.z = cone_identity;
    it.tau = 1.0;
    it.kappa = 1.0;

    KktSolver kkt(sf);
    const double nu = sf.barrier_degree + 1.0;
    const double bnorm = sf.p ? sf.b.norm() : 0.0;
    const double cnorm = sf.c.norm();

    SolveStatus status = SolveStatus::IterationLimit;
    std::string message;
    Iterate best = it;
    double best_merit = std::numeric_limits<double>::infinity();
    int stall_count = 0;
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        VectorXd xc = it.x.tail(sf.cone_dim);
        VectorXd ax = mat_vec(sf, it.x);
        VectorXd aty = mat_t_vec(sf, it.y);
        VectorXd rp = ax - sf.b * it.tau;  // want 0
        VectorXd rd(sf.n);                 // A'y + z - c tau
        rd = aty - sf.c * it.tau;
        rd.tail(sf.cone_dim) += it.z;
        double cx = sf.c.dot(it.x);
        double by = sf.p ? sf.b.dot(it.y) : 0.0;
        double rg = cx - by + it.kappa;
        double mu = (xc.dot(it.z) + it.tau * it.kappa) / nu;

        double pres = rp.norm() / (it.tau * (1.0 + bnorm));
        double dres = rd.norm() / (it.tau * (1.0 + cnorm));
        double pcost = cx / it.tau, dcost = by / it.tau;
        double relgap = std::abs(pcost - dcost) / (1.0 + std::max(std::abs(pcost), std::abs(dcost)));
        double compl_gap = xc.dot(it.z) / (it.tau * it.tau);
        if (opts.verbose) {
            std::fprintf(stderr,
                         "it %3d  pcost % .6e  dcost % .6e  pres %.2e  dres %.2e  gap %.2e  tau "
                         "%.2e  kap %.2e  |x| %.1e  |y| %.1e  |z| %.1e\n",
                         iter, pcost, dcost, pres, dres, relgap, it.tau, it.kappa, it.x.norm(),
                         it.y.norm(), it.z.norm());
        }
        double merit = std::max({pres, dres, std::min(relgap, std::abs(compl_gap))});
        if (merit < 0.999 * best_merit) stall_count = 0;
        else if (++stall_count >= 12) {
            status = SolveStatus::IterationLimit;
            message = "progress stalled";
            break;
        }
        if (merit < best_merit) {
            best_merit = merit;
            best = it;
        }
        if (pres <= opts.tol && dres <= opts.tol &&
            (relgap <= opts.tol || std::abs(compl_gap) <= opts.tol)) {
            status = SolveStatus::Optimal;
            break;
        }
        // infeasibility certificates
        if (by > 0) {
            VectorXd hidden = aty;
            hidden.tail(sf.cone_dim) += it.z;
            double infres = hidden.norm() / by;
            if (infres <= opts.tol * (1.0 + cnorm)) {
                status = SolveStatus::PrimalInfeasible;
                break;
            }
        }
        if (cx < 0) {
            double infres = ax.norm() / (-cx);
            if (infres <= opts.tol * (1.0 + bnorm)) {
                status = SolveStatus::DualInfeasibleOrUnbounded;
                break;
            }
        }

        if (!nt.update(xc, it.z)) {
            status = SolveStatus::NumericalError;
            message = "iterate left the cone interior";
            break;
        }
        if (!kkt.factor(nt)) {
            status = SolveStatus::NumericalError;
            message = "KKT factorization failed after regularization retries";
            break;
        }
        const VectorXd& lambda = nt.lambda();

        // shared pieces
        VectorXd gc = nt.apply_G(sf.c.tail(sf.cone_dim));
        VectorXd agc = VectorXd::Zero(sf.p);
        {
            VectorXd full = VectorXd::Zero(sf.n);
            full.tail(sf.cone_dim) = gc;
            agc = mat_vec(sf, full);
        }
        VectorXd r1_tau = sf.b + agc;
        VectorXd r2_tau = sf.c.head(sf.num_free);
        VectorXd u1_y, u1_f;
        kkt.solve_aug(r1_tau, r2_tau, u1_y, u1_f);

        auto solve_direction = [&](double eta, const VectorXd& ds, double dkap_rhs, Direction& dir) {
            VectorXd g_scaled = nt.jordan_solve_lambda(ds);
            VectorXd g = nt.unscale_z(g_scaled);
            VectorXd h = eta * rd.tail(sf.cone_dim) + g;  // cone part
            VectorXd gh = nt.apply_G(h);
            VectorXd agh = VectorXd::Zero(sf.p);
            {
                VectorXd full = VectorXd::Zero(sf.n);
                full.tail(sf.cone_dim) = gh;
                agh = mat_vec(sf, full);
            }
            VectorXd r1 = -eta * rp - agh;
            VectorXd r2 = -eta * rd.head(sf.num_free);
            VectorXd u2_y, u2_f;
            kkt.solve_aug(r1, r2, u2_y, u2_f);

            // dtau from the gap equation, linear in dtau: evaluate at 0 and 1
            auto gap_value = [&](double dtau, VectorXd& dy, VectorXd& dxf, VectorXd& dxc,
                                 double& dkappa) {
                dy = dtau * u1_y + u2_y;
                if (sf.num_free)
                    dxf = dtau * u1_f + u2_f;
                else
                    dxf.resize(0);
                VectorXd aty_d = mat_t_vec(sf, dy);
                VectorXd inner = aty_d.tail(sf.cone_dim) - sf.c.tail(sf.cone_dim) * dtau + h;
                dxc = nt.apply_G(inner);
                dkappa = (dkap_rhs - it.kappa * dtau) / it.tau;
                double cdx = sf.c.tail(sf.cone_dim).dot(dxc);
                if (sf.num_free) cdx += sf.c.head(sf.num_free).dot(dxf);
                double bdy = sf.p ? sf.b.dot(dy) : 0.0;
                return cdx - bdy + dkappa + eta * rg;
            };
            VectorXd dy0, dxf0, dxc0, dy1, dxf1, dxc1;
            double dk0, dk1;
            double v0 = gap_value(0.0, dy0, dxf0, dxc0, dk0);
            double v1 = gap_value(1.0, dy1, dxf1, dxc1, dk1);
            double denom = v1 - v0;
            double dtau = std::abs(denom) > 1e-300 ? -v0 / denom : 0.0;
            dir.dy = dtau * u1_y + u2_y;
            dir.dx.resize(sf.n);
            if (sf.num_free) dir.dx.head(sf.num_free) = dtau * u1_f + u2_f;
            {
                VectorXd aty_d = mat_t_vec(sf, dir.dy);
                VectorXd inner = aty_d.tail(sf.cone_dim) - sf.c.tail(sf.cone_dim) * dtau + h;
                dir.dx.tail(sf.cone_dim) = nt.apply_G(inner);
            }
            dir.dtau = dtau;
            // repair the primal rows with a least-squares row-space correction
            // (A A' is factored once); then take dz and dkappa from the dual
            // and gap rows directly. All three linear rows then hold to
            // machine precision and the solve error lands in the
            // complementarity equation, which the next iteration retargets.
            for (int round = 0; round < 3; ++round) {
                VectorXd prim_res = -eta * rp + sf.b * dir.dtau - mat_vec(sf, dir.dx);
                if (prim_res.norm() <= 1e-14 * (1.0 + rp.norm())) break;
                VectorXd corr = kkt.gram_aat.solve(prim_res);
                dir.dx += mat_t_vec(sf, corr);
            }
            VectorXd aty_dir = mat_t_vec(sf, dir.dy);
            dir.dz = sf.c.tail(sf.cone_dim) * dtau - aty_dir.tail(sf.cone_dim) -
                     eta * rd.tail(sf.cone_dim);
            dir.dkappa = -eta * rg - (sf.c.dot(dir.dx) - (sf.p ? sf.b.dot(dir.dy) : 0.0));
        };

        auto debug_check = [&](const char* tag, double eta, const VectorXd& ds, double dkap_rhs,
                               const Direction& d) {
            if (!opts.verbose) return;
            VectorXd e1 = mat_vec(sf, d.dx) - sf.b * d.dtau + eta * rp;
            VectorXd e2 = mat_t_vec(sf, d.dy) - sf.c * d.dtau + eta * rd;
            e2.tail(sf.cone_dim) += d.dz;
            double e3 = sf.c.dot(d.dx) - (sf.p ? sf.b.dot(d.dy) : 0.0) + d.dkappa + eta * rg;
            VectorXd e4 = nt.jordan_product(lambda, nt.scale_x(d.dx.tail(sf.cone_dim)) +
                                                        nt.scale_z(d.dz)) -
                          ds;
            double e5 = it.tau * d.dkappa + it.kappa * d.dtau - dkap_rhs;
            std::fprintf(stderr,
                         "  [%s] newton residuals: prim %.2e dual %.2e gap %.2e compl %.2e tk %.2e\n",
                         tag, e1.norm(), e2.norm(), std::abs(e3), e4.norm(), std::abs(e5));
        };

        // affine direction
        Direction aff;
        VectorXd ds_aff = -nt.jordan_product(lambda, lambda);
        solve_direction(1.0, ds_aff, -it.tau * it.kappa, aff);
        debug_check("affine", 1.0, ds_aff, -it.tau * it.kappa, aff);
        VectorXd dx_aff_scaled = nt.scale_x(aff.dx.tail(sf.cone_dim));
        VectorXd dz_aff_scaled = nt.scale_z(aff.dz);
        double alpha_aff = std::min({1.0, nt.max_step(xc, aff.dx.tail(sf.cone_dim)),
                                     nt.max_step(it.z, aff.dz),
                                     aff.dtau < 0 ? -it.tau / aff.dtau : 1.0,
                                     aff.dkappa < 0 ? -it.kappa / aff.dkappa : 1.0});
        double sigma = std::pow(1.0 - alpha_aff, 3);
        sigma = std::min(0.995, std::max(sigma, 0.0));

        // combined direction with Mehrotra correction
        Direction dir;
        VectorXd e = nt.identity();
        VectorXd ds = -nt.jordan_product(lambda, lambda) -
                      nt.jordan_product(dx_aff_scaled, dz_aff_scaled) + sigma * mu * e;
        double dkap_rhs = -it.tau * it.kappa - aff.dtau * aff.dkappa + sigma * mu;
        solve_direction(1.0 - sigma, ds, dkap_rhs, dir);
        debug_check("combined", 1.0 - sigma, ds, dkap_rhs, dir);

        double step_x = nt.max_step(xc, dir.dx.tail(sf.cone_dim));
        double step_z = nt.max_step(it.z, dir.dz);
        double step_tau = dir.dtau < 0 ? -it.tau / dir.dtau : 1.0 / kStep;
        double step_kappa = dir.dkappa < 0 ? -it.kappa / dir.dkappa : 1.0 / kStep;
        if (opts.verbose)
            std::fprintf(stderr, "  steps: x %.2e z %.2e tau %.2e kappa %.2e (aff %.2e sigma %.3f)\n",
                         step_x, step_z, step_tau, step_kappa, alpha_aff, sigma);
        double alpha = std::min({1.0 / kStep, step_x, step_z, step_tau, step_kappa});
        alpha *= kStep;
        alpha = std::min(alpha, 1.0);
        if (!std::isfinite(alpha) || alpha <= 1e-9) {
            status = SolveStatus::NumericalError;
            message = "step length collapsed";
            break;
        }
        it.x += alpha * dir.dx;
        it.y += alpha * dir.dy;
        it.z += alpha * dir.dz;
        it.tau += alpha * dir.dtau;
        it.kappa += alpha * dir.dkappa;
        if (!std::isfinite(it.x.sum()) || !std::isfinite(it.z.sum()) || it.tau <= 0 ||
            it.kappa < 0) {
            status = SolveStatus::NumericalError;
            message = "iterate diverged";
            break;
        }
    }

    // a numerical breakdown right before the stopping test would have fired
    // still counts when the best iterate already met the tolerance
    if (status == SolveStatus::NumericalError || status == SolveStatus::IterationLimit) {
        if (best_merit <= std::max(opts.tol, opts.accept_tol)) {
            it = best;
            status = SolveStatus::Optimal;
        } else if (best_merit < 1.0) {
            it = best;  // report the best point alongside the error status
        }
    }

    // scale back by tau
    Solution sol;
    if (status == SolveStatus::Optimal || status == SolveStatus::IterationLimit) {
        VectorXd x_final = it.x / it.tau;
        VectorXd y_final = it.y / it.tau;
        VectorXd z_final = it.z / it.tau;
        // Restoration of the equality rows, least-norm in an |x|-scaled
        // diagonal metric over the cone variables only: boundary variables
        // move in proportion to their own magnitude and the free variables
        // (the reported objective) stay put. Guarded: kept only while it
        // shrinks the residual without a large step.
        if ((sf.b - mat_vec(sf, x_final)).norm() > 1e-13 * (1.0 + bnorm)) {
            VectorXd d = VectorXd::Zero(sf.cone_dim);
            double xmax = 1.0 + x_final.cwiseAbs().maxCoeff();
            double floor_w = 1e-8 * xmax;
            for (std::int32_t i = 0; i < sf.cone_dim; ++i) {
                double xi = std::abs(x_final[sf.num_free + i]);
                d[i] = std::max(xi, floor_w);
                d[i] *= d[i];
            }
            MatrixXd mdm = MatrixXd::Zero(sf.p, sf.p);
            for (std::int32_t j = 0; j < sf.cone_dim; ++j) {
                const detail::SparseCol& col = sf.cols[sf.num_free + j];
                for (std::size_t a = 0; a < col.row.size(); ++a)
                    for (std::size_t bb = 0; bb < col.row.size(); ++bb)
                        mdm(col.row[a], col.row[bb]) += d[j] * col.val[a] * col.val[bb];
            }
            mdm.diagonal().array() += 1e-14 * (1.0 + mdm.diagonal().maxCoeff());
            Eigen::LDLT<MatrixXd> pol(mdm);
            if (pol.info() == Eigen::Success) {
                for (int round = 0; round < 3; ++round) {
                    VectorXd res = sf.b - mat_vec(sf, x_final);
                    double before = res.norm();
                    if (before <= 1e-13 * (1.0 + bnorm)) break;
                    VectorXd dy = pol.solve(res);
                    for (int refine = 0; refine < 2; ++refine)
                        dy += pol.solve(res - mdm.selfadjointView<Eigen::Upper>() * dy);
                    VectorXd aty_dy = mat_t_vec(sf, dy);
                    VectorXd candidate = x_final;
                    for (std::int32_t i = 0; i < sf.cone_dim; ++i)
                        candidate[sf.num_free + i] += d[i] * aty_dy[sf.num_free + i];
                    if ((candidate - x_final).norm() > 1e-2 * (1.0 + x_final.norm())) break;
                    if ((sf.b - mat_vec(sf, candidate)).norm() >= 0.5 * before) break;
                    x_final = candidate;
                }
            }
            // repair the (restoration-sized) cone violations by clipping and
            // diagonal lifts; the row damage this reintroduces is bounded by
            // the violation sizes, far below the restored residual gain
            for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
                double& v = x_final[sf.nonneg_begin - sf.num_free + sf.num_free + i];
                if (v < 0) v = 0;
            }
            for (std::size_t c = 0; c < sf.soc_dims.size(); ++c) {
                std::int32_t off = sf.num_free + sf.soc_begin[c] - sf.num_free;
                double tail = 0.0;
                for (std::int32_t i = 1; i < sf.soc_dims[c]; ++i)
                    tail += x_final[off + i] * x_final[off + i];
                tail = std::sqrt(tail);
                if (x_final[off] < tail) x_final[off] = tail * (1.0 + 1e-14);
            }
            for (std::size_t c = 0; c < sf.psd_dims.size(); ++c) {
                std::int32_t k = sf.psd_dims[c];
                std::int32_t off = sf.num_free + sf.psd_begin[c] - sf.num_free;
                MatrixXd xm;
                detail::svec_to_mat(x_final.data() + off, k, xm);
                Eigen::SelfAdjointEigenSolver<MatrixXd> es(xm, Eigen::EigenvaluesOnly);
                double emin = es.eigenvalues().minCoeff();
                if (emin < 0) {
                    std::size_t idx = 0;
                    for (std::int32_t i = 0; i < k; ++i)
                        for (std::int32_t j = i; j < k; ++j, ++idx)
                            if (i == j) x_final[off + idx] -= emin * (1.0 + 1e-12);
                }
            }
        }
        sol = finalize(cp, pr, status, x_final, y_final, z_final, iter, message);
        VectorXd xc = x_final.tail(sf.cone_dim);
        sol.residuals.primal = (mat_vec(sf, x_final) - sf.b).norm() / (1.0 + bnorm);
        VectorXd rd = mat_t_vec(sf, y_final) - sf.c;
        rd.tail(sf.cone_dim) += z_final;
        sol.residuals.dual = rd.norm() / (1.0 + cnorm);
        sol.residuals.gap = std::abs(xc.dot(z_final));
    } else if (status == SolveStatus::PrimalInfeasible) {
        double by = sf.b.dot(it.y);
        VectorXd y_cert = it.y / by;
        VectorXd z_cert = it.z / by;
        sol = finalize(cp, pr, status, VectorXd::Zero(sf.n), y_cert, z_cert, iter, message);
        sol.x.assign(cp.num_vars, 0.0);
        VectorXd hidden = mat_t_vec(sf, y_cert);
        hidden.tail(sf.cone_dim) += z_cert;
        sol.residuals.dual = hidden.norm();
        sol.residuals.primal = 0.0;
        sol.residuals.gap = 0.0;
        sol.objective = cp.maximize ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
    } else if (status == SolveStatus::DualInfeasibleOrUnbounded) {
        double cx = sf.c.dot(it.x);
        VectorXd x_cert = it.x / (-cx);
        sol = finalize(cp, pr, status, x_cert, VectorXd::Zero(sf.p), VectorXd::Zero(sf.cone_dim),
                       iter, message);
        sol.residuals.primal = mat_vec(sf, x_cert).norm();
        sol.residuals.dual = 0.0;
        sol.residuals.gap = 0.0;
        sol.objective = cp.maximize ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
    } else {
        sol = finalize(cp, pr, status, it.x / it.tau, it.y / it.tau, it.z / it.tau, iter, message);
    }
    return sol;
}

ResidualReport compute_residuals(const ConicProgram& cp, const Solution& sol) {
    ResidualReport rep;
    const auto n = cp.num_vars;
    double sense = cp.maximize ? -1.0 : 1.0;
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < cp.objective_index.size(); ++k)
        c[cp.objective_index[k]] += sense * cp.objective_coeff[k];
    // primal: ||Ax - b||_inf
    for (const auto& row : cp.rows) {
        double s = -row.rhs;
        for (std::size_t k = 0; k < row.index.size(); ++k)
            s += row.coeff[k] * sol.x[row.index[k]];
        rep.primal = std::max(rep.primal, std::abs(s));
    }
    // dual: ||c - A'y - z||_inf plus K* violation of z
    std::vector<double> slack = c;
    for (std::size_t r = 0; r < cp.rows.size(); ++r)
        for (std::size_t k = 0; k < cp.rows[r].index.size(); ++k)
            slack[cp.rows[r].index[k]] -= cp.rows[r].coeff[k] * sol.y[r];
    double dual_eq = 0.0;
    for (std::int32_t v = 0; v < n; ++v) dual_eq = std::max(dual_eq, std::abs(slack[v] - sol.z[v]));
    double cone_violation = 0.0;
    for (const auto& cone : cp.cones) {
        if (const auto* nn = std::get_if<NonnegCone>(&cone)) {
            for (auto v : nn->vars) cone_violation = std::max(cone_violation, -sol.z[v]);
        } else if (const auto* lc = std::get_if<LorentzCone>(&cone)) {
            double head = sol.z[lc->vars[0]];
            double tail = 0.0;
            for (std::size_t i = 1; i < lc->vars.size(); ++i)
                tail += sol.z[lc->vars[i]] * sol.z[lc->vars[i]];
            cone_violation = std::max(cone_violation, std::sqrt(tail) - head);
        } else if (const auto* pc = std::get_if<PsdCone>(&cone)) {
            const std::int32_t k = pc->size;
            Eigen::MatrixXd zmat(k, k);
            for (std::int32_t i = 0; i < k; ++i)
                for (std::int32_t j = i; j < k; ++j) {
                    double v = sol.z[pc->vars[ConicProgram::tri_index(k, i, j)]];
                    if (i != j) v *= 0.5;  // raw pairing convention stores 2 Z_ij
                    zmat(i, j) = v;
                    zmat(j, i) = v;
                }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(zmat, Eigen::EigenvaluesOnly);
            cone_violation = std::max(cone_violation, -es.eigenvalues().minCoeff());
        }
    }
    rep.dual = std::max(dual_eq, cone_violation);
    double xz = 0.0;
    for (std::int32_t v = 0; v < n; ++v) xz += sol.x[v] * sol.z[v];
    rep.gap = std::abs(xz);
    return rep;
}

}  // namespace polyopt
