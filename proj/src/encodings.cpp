#include "polyopt/encodings.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "polyopt/instance_io.hpp"

namespace polyopt {

std::string gram_cone_name(GramCone c) {
    switch (c) {
        case GramCone::Scalar: return "scalar";
        case GramCone::Dsos: return "dsos";
        case GramCone::Sdsos: return "sdsos";
        case GramCone::Sos: return "sos";
    }
    return "?";
}

namespace {

GramBlockHandle scalar_block(GramCone cone, ConicProgram& cp) {
    GramBlockHandle h;
    h.cone = cone;
    h.size = 1;
    h.q_vars = {cp.new_var()};
    cp.cones.push_back(NonnegCone{{h.q_vars[0]}});
    return h;
}

}  // namespace

GramBlockHandle encode_psd(const GramTemplate& t, ConicProgram& cp) {
    const std::int32_t k = t.size();
    if (k == 1) return scalar_block(GramCone::Sos, cp);
    GramBlockHandle h;
    h.cone = GramCone::Sos;
    h.size = k;
    h.q_vars = cp.new_vars(k * (k + 1) / 2);
    cp.cones.push_back(PsdCone{k, h.q_vars});
    return h;
}

GramBlockHandle encode_dd(const GramTemplate& t, ConicProgram& cp) {
    const std::int32_t k = t.size();
    if (k == 1) return scalar_block(GramCone::Dsos, cp);
    GramBlockHandle h;
    h.cone = GramCone::Dsos;
    h.size = k;
    h.q_vars = cp.new_vars(k * (k + 1) / 2);  // free entries of Q
    std::vector<std::int32_t> slacks;
    for (std::int32_t i = 0; i < k; ++i)
        for (std::int32_t j = i + 1; j < k; ++j) {
            std::int32_t q = h.q_vars[ConicProgram::tri_index(k, i, j)];
            std::int32_t u = cp.new_var();  // free; u >= |q| via the two rows below
            h.dd_abs_vars.push_back(u);
            std::int32_t s_plus = cp.new_var();
            std::int32_t s_minus = cp.new_var();
            slacks.push_back(s_plus);
            slacks.push_back(s_minus);
            LinearRow r1;  // u - q - s_plus = 0
            r1.add(u, 1.0);
            r1.add(q, -1.0);
            r1.add(s_plus, -1.0);
            cp.rows.push_back(std::move(r1));
            LinearRow r2;  // u + q - s_minus = 0
            r2.add(u, 1.0);
            r2.add(q, 1.0);
            r2.add(s_minus, -1.0);
            cp.rows.push_back(std::move(r2));
        }
    for (std::int32_t i = 0; i < k; ++i) {
        LinearRow row;  // Q_ii - sum_{j != i} u_ij - t_i = 0
        row.add(h.q_vars[ConicProgram::tri_index(k, i, i)], 1.0);
        std::int32_t pair = 0;
        for (std::int32_t a = 0; a < k; ++a)
            for (std::int32_t b = a + 1; b < k; ++b, ++pair)
                if (a == i || b == i) row.add(h.dd_abs_vars[pair], -1.0);
        std::int32_t t_i = cp.new_var();
        slacks.push_back(t_i);
        row.add(t_i, -1.0);
        cp.rows.push_back(std::move(row));
    }
    cp.cones.push_back(NonnegCone{std::move(slacks)});
    return h;
}

GramBlockHandle encode_sdd(const GramTemplate& t, ConicProgram& cp) {
    const std::int32_t k = t.size();
    if (k == 1) return scalar_block(GramCone::Sdsos, cp);
    GramBlockHandle h;
    h.cone = GramCone::Sdsos;
    h.size = k;
    h.q_vars = cp.new_vars(k * (k + 1) / 2);  // free entries of Q
    for (std::int32_t i = 0; i < k; ++i)
        for (std::int32_t j = i + 1; j < k; ++j) {
            auto triple = cp.new_vars(3);
            cp.cones.push_back(LorentzCone{{triple[0], triple[1], triple[2]}});
            h.sdd_pair_vars.push_back({triple[0], triple[1], triple[2]});
            LinearRow off;  // Q_ij = l1 / 2
            off.add(h.q_vars[ConicProgram::tri_index(k, i, j)], 1.0);
            off.add(triple[1], -0.5);
            cp.rows.push_back(std::move(off));
        }
    // Q_ii = sum over pairs containing i of the matching diagonal of A^{ij}:
    //   pair (i, j), i < j: A_ii = (l0 + l2)/2 ; pair (j, i), j < i: (l0 - l2)/2.
    std::int32_t pair = 0;
    std::vector<LinearRow> diag(k);
    for (std::int32_t i = 0; i < k; ++i)
        diag[i].add(h.q_vars[ConicProgram::tri_index(k, i, i)], 1.0);
    for (std::int32_t a = 0; a < k; ++a)
        for (std::int32_t b = a + 1; b < k; ++b, ++pair) {
            const auto& tr = h.sdd_pair_vars[pair];
            diag[a].add(tr[0], -0.5);
            diag[a].add(tr[2], -0.5);
            diag[b].add(tr[0], -0.5);
            diag[b].add(tr[2], 0.5);
        }
    for (auto& row : diag) cp.rows.push_back(std::move(row));
    return h;
}

GramBlockHandle encode_gram(const GramTemplate& t, GramCone cone, ConicProgram& cp) {
    switch (cone) {
        case GramCone::Scalar: return scalar_block(GramCone::Scalar, cp);
        case GramCone::Dsos: return encode_dd(t, cp);
        case GramCone::Sdsos: return encode_sdd(t, cp);
        case GramCone::Sos: return encode_psd(t, cp);
    }
    throw std::logic_error("bad cone");
}

bool check_dd(const Eigen::MatrixXd& m, double slack) {
    if (m.rows() != m.cols()) throw std::invalid_argument("check_dd: matrix not square");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (m(i, j) != m(j, i)) {
                double scale = std::max(std::abs(m(i, j)), std::abs(m(j, i)));
                if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, scale))
                    throw std::invalid_argument("check_dd: matrix not symmetric");
            }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double off = 0;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (j != i) off += std::abs(m(i, j));
        if (m(i, i) + slack < off) return false;
    }
    return true;
}

namespace {

/// Pairwise split of a DD matrix: A^{ij}_ij = m_ij and each diagonal takes
/// |m_ij| plus an equal share of the row slack. Every block is 2x2 diagonally
/// dominant, hence PSD, and the blocks sum to m.
void dd_pairwise_split(const Eigen::MatrixXd& m, std::vector<Eigen::Matrix2d>& blocks) {
    const auto k = m.rows();
    Eigen::VectorXd slack(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        double off = 0;
        for (Eigen::Index j = 0; j < k; ++j)
            if (j != i) off += std::abs(m(i, j));
        slack(i) = m(i, i) - off;
    }
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            Eigen::Matrix2d a;
            a << std::abs(m(i, j)) + slack(i) / (k - 1), m(i, j), m(i, j),
                std::abs(m(i, j)) + slack(j) / (k - 1);
            blocks.push_back(a);
        }
}

}  // namespace

bool sdd_split(const Eigen::MatrixXd& m, std::vector<Eigen::Matrix2d>* blocks, double tol) {
    const auto k = m.rows();
    if (k != m.cols()) throw std::invalid_argument("sdd_split: matrix not square");
    if (blocks) blocks->clear();
    if (k == 1) return m(0, 0) >= -tol;
    if (check_dd(m, tol)) {
        if (blocks) dd_pairwise_split(m, *blocks);
        return true;
    }
    // Sufficient witness for the non-DD case: rescale to a unit diagonal and
    // split the scaled matrix if it came out diagonally dominant.
    Eigen::VectorXd d(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        double mii = m(i, i);
        if (mii < -tol) return false;
        d(i) = std::sqrt(std::max(mii, 0.0));
    }
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j)
            if (std::abs(m(i, j)) > tol && (d(i) == 0.0 || d(j) == 0.0)) return false;
    Eigen::MatrixXd scaled = m;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (d(i) > 0 && d(j) > 0) scaled(i, j) = m(i, j) / (d(i) * d(j));
    for (Eigen::Index i = 0; i < k; ++i)
        if (d(i) > 0) scaled(i, i) = 1.0;
    if (!check_dd(scaled, tol)) return false;
    if (blocks) {
        std::vector<Eigen::Matrix2d> scaled_blocks;
        dd_pairwise_split(scaled, scaled_blocks);
        std::size_t pair = 0;
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = i + 1; j < k; ++j, ++pair) {
                Eigen::Matrix2d a = scaled_blocks[pair];
                a(0, 0) *= d(i) * d(i);
                a(0, 1) = m(i, j);
                a(1, 0) = m(i, j);
                a(1, 1) *= d(j) * d(j);
                blocks->push_back(a);
            }
    }
    return true;
}

InclusionProbeReport cone_inclusion_probe(int size, int samples, std::uint64_t seed) {
    InclusionProbeReport report;
    std::uint64_t state = seed ^ 0xD1B54A32D192ED03ULL;
    auto uniform = [&]() {
        return static_cast<double>(splitmix64(state) >> 11) / 9007199254740992.0 * 2.0 - 1.0;
    };
    auto eigmin = [](const Eigen::MatrixXd& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    };
    for (int s = 0; s < samples; ++s) {
        // random DD matrix: random off-diagonals, diagonal = row mass + slack
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = i + 1; j < size; ++j) m(i, j) = m(j, i) = uniform();
        for (int i = 0; i < size; ++i) {
            double off = m.row(i).cwiseAbs().sum();
            m(i, i) = off + std::abs(uniform());
        }
        ++report.dd_samples;
        std::vector<Eigen::Matrix2d> blocks;
        if (!sdd_split(m, &blocks))
            report.violations.push_back("DD sample " + std::to_string(s) + " not SDD-splittable");
        else {
            Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(size, size);
            int pair = 0;
            for (int i = 0; i < size; ++i)
                for (int j = i + 1; j < size; ++j, ++pair) {
                    sum(i, i) += blocks[pair](0, 0);
                    sum(j, j) += blocks[pair](1, 1);
                    sum(i, j) += blocks[pair](0, 1);
                    sum(j, i) += blocks[pair](1, 0);
                    if (eigmin(blocks[pair]) < -1e-9)
                        report.violations.push_back("split block not PSD in sample " +
                                                    std::to_string(s));
                }
            if ((sum - m).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
                report.violations.push_back("split does not reassemble sample " +
                                            std::to_string(s));
        }
        if (eigmin(m) < -1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
            report.violations.push_back("DD sample " + std::to_string(s) + " not PSD");

        // random SDD construction: sum of random PSD 2x2 pair blocks
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = i + 1; j < size; ++j) {
                double a = std::abs(uniform()), d = std::abs(uniform());
                double bmax = std::sqrt(a * d);
                double b = uniform() * bmax;
                q(i, i) += a;
                q(j, j) += d;
                q(i, j) += b;
                q(j, i) += b;
            }
        ++report.sdd_samples;
        if (eigmin(q) < -1e-9 * std::max(1.0, q.cwiseAbs().maxCoeff()))
            report.violations.push_back("SDD sample " + std::to_string(s) + " not PSD");
    }
    return report;
}

}  // namespace polyopt
