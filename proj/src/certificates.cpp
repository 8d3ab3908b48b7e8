#include "polyopt/certificates.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

namespace polyopt {

Certificate decode(const Solution& sol, const DecoderMap& dm) {
    if (sol.status != SolveStatus::Optimal)
        throw StatusNotOptimal("cannot decode a " + status_name(sol.status) + " solution");
    Certificate cert;
    cert.spec = dm.spec;
    cert.lambda = sol.x[dm.lambda_var];
    cert.lhs_base = dm.lhs_base;
    for (const auto& blk : dm.blocks) {
        DecodedMultiplier m;
        m.cone = blk.handle.cone;
        m.carrier = blk.carrier;
        m.basis = blk.basis;
        m.index = blk.index;
        m.constraint_index = blk.constraint_index;
        const std::int32_t k = blk.handle.size;
        m.gram.resize(k, k);
        for (std::int32_t i = 0; i < k; ++i)
            for (std::int32_t j = i; j < k; ++j) {
                double v = sol.x[blk.handle.q_vars[ConicProgram::tri_index(k, i, j)]];
                m.gram(i, j) = v;
                m.gram(j, i) = v;
            }
        for (const auto& triple : blk.handle.sdd_pair_vars) {
            double l0 = sol.x[triple[0]], l1 = sol.x[triple[1]], l2 = sol.x[triple[2]];
            Eigen::Matrix2d a;
            a << (l0 + l2) / 2.0, l1 / 2.0, l1 / 2.0, (l0 - l2) / 2.0;
            m.sdd_blocks.push_back(a);
        }
        // expand z' Q z through the template (decoded, so double arithmetic)
        GramTemplate templ(m.basis);
        std::vector<double> q_upper(blk.handle.q_vars.size());
        for (std::size_t i = 0; i < q_upper.size(); ++i) q_upper[i] = sol.x[blk.handle.q_vars[i]];
        m.value = templ.expand(q_upper);
        cert.multipliers.push_back(std::move(m));
    }
    return cert;
}

namespace {

double coeff_inf_norm(const PolynomialD& p) {
    double m = 0.0;
    for (const auto& [mono, c] : p.terms()) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

VerifyReport verify(const PopInstance& inst, const Certificate& cert, double tol) {
    VerifyReport rep;
    PolynomialD lhs = to_double_poly(cert.lhs_base) *
                      (to_double_poly(inst.objective) -
                       PolynomialD::constant(inst.n, cert.lambda));
    PolynomialD rhs(inst.n);
    for (const auto& m : cert.multipliers) rhs += m.value * to_double_poly(m.carrier);
    rep.identity_residual = coeff_inf_norm(lhs - rhs);

    // scale-free acceptance: relative to the matched identity's own
    // coefficient norm (for the QM family this is just 1 + |f|_inf)
    double fnorm = coeff_inf_norm(lhs);

    for (std::size_t i = 0; i < cert.multipliers.size(); ++i) {
        const auto& m = cert.multipliers[i];
        double scale = std::max(1.0, m.gram.cwiseAbs().maxCoeff());
        std::ostringstream tag;
        tag << "multiplier " << i << " (" << gram_cone_name(m.cone) << ")";
        switch (m.cone) {
            case GramCone::Scalar:
                if (m.gram(0, 0) < -tol * scale)
                    rep.cone_violations.push_back(tag.str() + ": negative scalar");
                break;
            case GramCone::Dsos:
                if (!check_dd(m.gram, tol * scale))
                    rep.cone_violations.push_back(tag.str() + ": Gram not diagonally dominant");
                break;
            case GramCone::Sdsos: {
                Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m.gram.rows(), m.gram.cols());
                std::size_t pair = 0;
                bool bad = false;
                for (Eigen::Index a = 0; a < m.gram.rows() && pair < m.sdd_blocks.size(); ++a)
                    for (Eigen::Index b = a + 1; b < m.gram.cols() && pair < m.sdd_blocks.size();
                         ++b, ++pair) {
                        const auto& blk = m.sdd_blocks[pair];
                        if (blk(0, 0) < -tol * scale || blk(1, 1) < -tol * scale ||
                            blk(0, 0) * blk(1, 1) - blk(0, 1) * blk(1, 0) <
                                -tol * scale * scale)
                            bad = true;
                        sum(a, a) += blk(0, 0);
                        sum(b, b) += blk(1, 1);
                        sum(a, b) += blk(0, 1);
                        sum(b, a) += blk(1, 0);
                    }
                if (bad) rep.cone_violations.push_back(tag.str() + ": a 2x2 pair block is not PSD");
                if (m.gram.rows() > 1 &&
                    (sum - m.gram).cwiseAbs().maxCoeff() > tol * scale * m.gram.rows())
                    rep.cone_violations.push_back(tag.str() + ": pair blocks do not sum to Q");
                if (m.gram.rows() == 1 && m.gram(0, 0) < -tol * scale)
                    rep.cone_violations.push_back(tag.str() + ": negative scalar");
                break;
            }
            case GramCone::Sos: {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.gram, Eigen::EigenvaluesOnly);
                if (es.eigenvalues().minCoeff() < -tol * scale)
                    rep.cone_violations.push_back(tag.str() + ": Gram has a negative eigenvalue");
                break;
            }
        }
    }
    rep.pass = rep.identity_residual <= tol * (1.0 + fnorm) && rep.cone_violations.empty();
    return rep;
}

std::string VerifyReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"residual\":" << identity_residual << ",\"violations\":[";
    for (std::size_t i = 0; i < cone_violations.size(); ++i) {
        if (i) os << ",";
        os << "\"" << cone_violations[i] << "\"";
    }
    os << "],\"pass\":" << (pass ? "true" : "false") << "}";
    return os.str();
}

bool ChainReport::ordered(double tol) const {
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        if (bounds[i] > bounds[i + 1] + tol) return false;
    return true;
}

bool ChainReport::below_optimum(double tol) const {
    if (!known_optimum) return true;
    for (double b : bounds)
        if (std::isfinite(b) && b > *known_optimum + tol) return false;
    return true;
}

ChainReport chain_check(const PopInstance& inst, int r, const SolveOptions& opts) {
    ChainReport rep;
    rep.r = r;
    rep.known_optimum = inst.known_optimum;
    SolveOptions chain_opts = opts;
    chain_opts.accept_tol = std::max(chain_opts.accept_tol, 1e-6);
    const GramCone order[4] = {GramCone::Scalar, GramCone::Dsos, GramCone::Sdsos, GramCone::Sos};
    for (GramCone cone : order) {
        HierarchySpec spec{Family::PO, cone, r};
        BuildResult build = build_hierarchy(inst, spec);
        Solution sol = solve(build.program, chain_opts);
        rep.statuses.push_back(sol.status);
        if (sol.status == SolveStatus::Optimal)
            rep.bounds.push_back(sol.objective);
        else if (sol.status == SolveStatus::PrimalInfeasible)
            rep.bounds.push_back(-std::numeric_limits<double>::infinity());
        else
            rep.bounds.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    return rep;
}

}  // namespace polyopt
