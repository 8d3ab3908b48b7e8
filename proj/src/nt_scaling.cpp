#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "polyopt/kernels.hpp"
#include "solver_internal.hpp"

namespace polyopt::detail {

namespace {
constexpr double kInteriorFloor = 1e-14;
}

namespace {

// W_unit u for the hyperbolic scaling point wbar (J-unit): the symmetric
// matrix [w0, w1'; w1, I + w1 w1'/(1+w0)]; inverse flips the sign pattern.
void soc_apply_wunit(const VectorXd& wbar, const double* u, double* out, bool inverse) {
    const auto d = static_cast<std::int32_t>(wbar.size());
    double w0 = wbar[0];
    double sgn = inverse ? -1.0 : 1.0;
    double dot1 = 0.0;
    for (std::int32_t i = 1; i < d; ++i) dot1 += wbar[i] * u[i];
    out[0] = w0 * u[0] + sgn * dot1;
    double f = (sgn * u[0] + dot1 / (1.0 + w0));
    for (std::int32_t i = 1; i < d; ++i) out[i] = u[i] + f * wbar[i];
}

void soc_apply_wunit_fwd(const VectorXd& wbar, const double* u, double* out) {
    soc_apply_wunit(wbar, u, out, false);
}

}  // namespace

double NTScaling::soc_residual(const double* v, std::int32_t dim) {
    double s = v[0] * v[0];
    for (std::int32_t i = 1; i < dim; ++i) s -= v[i] * v[i];
    return s;
}

bool NTScaling::update(const VectorXd& x, const VectorXd& z) {
    const StdForm& sf = *sf_;
    lambda_.resize(sf.cone_dim);
    nonneg_w_.resize(sf.num_nonneg);
    const std::int32_t nb = sf.nonneg_begin - sf.num_free;  // lambda-space offset
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        double xi = x[nb + i], zi = z[nb + i];
        if (xi <= kInteriorFloor || zi <= kInteriorFloor) return false;
        nonneg_w_[i] = std::sqrt(xi / zi);
        lambda_[nb + i] = std::sqrt(xi * zi);
    }
    soc_.assign(sf.soc_dims.size(), {});
    for (std::size_t c = 0; c < sf.soc_dims.size(); ++c) {
        const std::int32_t d = sf.soc_dims[c];
        const std::int32_t off = sf.soc_begin[c] - sf.num_free;
        double resx = soc_residual(x.data() + off, d);
        double resz = soc_residual(z.data() + off, d);
        if (resx <= 0 || resz <= 0 || x[off] <= 0 || z[off] <= 0) return false;
        double sx = std::sqrt(resx), sz = std::sqrt(resz);
        VectorXd xb = x.segment(off, d) / sx;
        VectorXd zb = z.segment(off, d) / sz;
        double gamma = std::sqrt((1.0 + xb.dot(zb)) / 2.0);
        SocScaling s;
        s.eta = std::sqrt(sx / sz);
        s.wbar = xb;
        s.wbar[0] += zb[0];
        for (std::int32_t i = 1; i < d; ++i) s.wbar[i] -= zb[i];
        s.wbar /= (2.0 * gamma);
        soc_[c] = std::move(s);
    }
    psd_.assign(sf.psd_dims.size(), {});
    psd_T_.assign(sf.psd_dims.size(), {});
    for (std::size_t c = 0; c < sf.psd_dims.size(); ++c) {
        const std::int32_t k = sf.psd_dims[c];
        const std::int32_t off = sf.psd_begin[c] - sf.num_free;
        MatrixXd X, Z;
        svec_to_mat(x.data() + off, k, X);
        svec_to_mat(z.data() + off, k, Z);
        Eigen::LLT<MatrixXd> lx(X), lz(Z);
        if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
        MatrixXd Lx = lx.matrixL();
        MatrixXd Lz = lz.matrixL();
        Eigen::BDCSVD<MatrixXd> svd(Lz.transpose() * Lx,
                                    Eigen::ComputeThinU | Eigen::ComputeThinV);
        VectorXd sig = svd.singularValues();
        if (sig.minCoeff() <= kInteriorFloor) return false;
        PsdScaling s;
        VectorXd isqrt = sig.cwiseSqrt().cwiseInverse();
        s.R = Lx * svd.matrixV() * isqrt.asDiagonal();
        // R^{-1} = sqrt(Sigma)^{-1} U' Lz'
        s.Rinv = isqrt.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
        s.T = s.R * s.R.transpose();
        s.Tinv = s.Rinv.transpose() * s.Rinv;
        s.sigma = sig;
        double* lam = lambda_.data() + off;
        MatrixXd L = sig.asDiagonal();
        mat_to_svec(L, lam);
        psd_T_[c] = s.T;
        psd_[c] = std::move(s);
    }
    // lambda = W z on the SOC blocks, via the scaling operator itself
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        const std::int32_t d = sf.soc_dims[c];
        const std::int32_t loff = sf.soc_begin[c] - sf.num_free;
        soc_apply_wunit_fwd(soc_[c].wbar, z.data() + loff, lambda_.data() + loff);
        for (std::int32_t i = 0; i < d; ++i) lambda_[loff + i] *= soc_[c].eta;
    }
    return true;
}

VectorXd NTScaling::scale_x(const VectorXd& u) const {
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = u[li] / nonneg_w_[i];
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t loff = sf.soc_begin[c] - sf.num_free;
        soc_apply_wunit(soc_[c].wbar, u.data() + loff, out.data() + loff, true);
        out.segment(loff, sf.soc_dims[c]) /= soc_[c].eta;
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd U;
        svec_to_mat(u.data() + loff, k, U);
        MatrixXd S = psd_[c].Rinv * U * psd_[c].Rinv.transpose();
        S = 0.5 * (S + S.transpose()).eval();
        mat_to_svec(S, out.data() + loff);
    }
    return out;
}

VectorXd NTScaling::scale_z(const VectorXd& u) const {
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = u[li] * nonneg_w_[i];
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t loff = sf.soc_begin[c] - sf.num_free;
        soc_apply_wunit(soc_[c].wbar, u.data() + loff, out.data() + loff, false);
        out.segment(loff, sf.soc_dims[c]) *= soc_[c].eta;
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd U;
        svec_to_mat(u.data() + loff, k, U);
        MatrixXd S = psd_[c].R.transpose() * U * psd_[c].R;
        S = 0.5 * (S + S.transpose()).eval();
        mat_to_svec(S, out.data() + loff);
    }
    return out;
}

VectorXd NTScaling::unscale_x(const VectorXd& u) const {
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = u[li] * nonneg_w_[i];
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t loff = sf.soc_begin[c] - sf.num_free;
        soc_apply_wunit(soc_[c].wbar, u.data() + loff, out.data() + loff, false);
        out.segment(loff, sf.soc_dims[c]) *= soc_[c].eta;
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd U;
        svec_to_mat(u.data() + loff, k, U);
        MatrixXd S = psd_[c].R * U * psd_[c].R.transpose();
        S = 0.5 * (S + S.transpose()).eval();
        mat_to_svec(S, out.data() + loff);
    }
    return out;
}

VectorXd NTScaling::unscale_z(const VectorXd& u) const {
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = u[li] / nonneg_w_[i];
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t loff = sf.soc_begin[c] - sf.num_free;
        soc_apply_wunit(soc_[c].wbar, u.data() + loff, out.data() + loff, true);
        out.segment(loff, sf.soc_dims[c]) /= soc_[c].eta;
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd U;
        svec_to_mat(u.data() + loff, k, U);
        MatrixXd S = psd_[c].Rinv.transpose() * U * psd_[c].Rinv;
        S = 0.5 * (S + S.transpose()).eval();
        mat_to_svec(S, out.data() + loff);
    }
    return out;
}

VectorXd NTScaling::apply_G(const VectorXd& u) const {
    // W^2 u: unscale_x composed with scale_z^{-1}... directly: for LP w^2,
    // SOC eta^2(2 wbar wbar' - J), PSD T U T.
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = u[li] * nonneg_w_[i] * nonneg_w_[i];
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t d = sf.soc_dims[c], loff = sf.soc_begin[c] - sf.num_free;
        const VectorXd& wb = soc_[c].wbar;
        double eta2 = soc_[c].eta * soc_[c].eta;
        double dotw = 0.0;
        for (std::int32_t i = 0; i < d; ++i) dotw += wb[i] * u[loff + i];
        out[loff] = eta2 * (2.0 * wb[0] * dotw - u[loff]);
        for (std::int32_t i = 1; i < d; ++i) out[loff + i] = eta2 * (2.0 * wb[i] * dotw + u[loff + i]);
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd U;
        svec_to_mat(u.data() + loff, k, U);
        MatrixXd S = psd_[c].T * U * psd_[c].T;
        S = 0.5 * (S + S.transpose()).eval();
        mat_to_svec(S, out.data() + loff);
    }
    return out;
}

VectorXd NTScaling::apply_Ginv(const VectorXd& u) const {
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = u[li] / (nonneg_w_[i] * nonneg_w_[i]);
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t d = sf.soc_dims[c], loff = sf.soc_begin[c] - sf.num_free;
        const VectorXd& wb = soc_[c].wbar;
        double eta2 = soc_[c].eta * soc_[c].eta;
        // inverse of 2 wbar wbar' - J is 2 (J wbar)(J wbar)' - J
        double dotw = wb[0] * u[loff];
        for (std::int32_t i = 1; i < d; ++i) dotw -= wb[i] * u[loff + i];
        out[loff] = (2.0 * wb[0] * dotw - u[loff]) / eta2;
        for (std::int32_t i = 1; i < d; ++i)
            out[loff + i] = (-2.0 * wb[i] * dotw + u[loff + i]) / eta2;
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd U;
        svec_to_mat(u.data() + loff, k, U);
        MatrixXd S = psd_[c].Tinv * U * psd_[c].Tinv;
        S = 0.5 * (S + S.transpose()).eval();
        mat_to_svec(S, out.data() + loff);
    }
    return out;
}

VectorXd NTScaling::jordan_product(const VectorXd& u, const VectorXd& v) const {
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = u[li] * v[li];
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t d = sf.soc_dims[c], loff = sf.soc_begin[c] - sf.num_free;
        double dot = 0.0;
        for (std::int32_t i = 0; i < d; ++i) dot += u[loff + i] * v[loff + i];
        out[loff] = dot;
        for (std::int32_t i = 1; i < d; ++i)
            out[loff + i] = u[loff] * v[loff + i] + v[loff] * u[loff + i];
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd U, V;
        svec_to_mat(u.data() + loff, k, U);
        svec_to_mat(v.data() + loff, k, V);
        MatrixXd S = 0.5 * (U * V + V * U);
        mat_to_svec(S, out.data() + loff);
    }
    return out;
}

VectorXd NTScaling::jordan_solve_lambda(const VectorXd& r) const {
    const StdForm& sf = *sf_;
    VectorXd out(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        out[li] = r[li] / lambda_[li];
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t d = sf.soc_dims[c], loff = sf.soc_begin[c] - sf.num_free;
        const double* lam = lambda_.data() + loff;
        double nrm1 = 0.0, dot1 = 0.0;
        for (std::int32_t i = 1; i < d; ++i) {
            nrm1 += lam[i] * lam[i];
            dot1 += lam[i] * r[loff + i];
        }
        double det = lam[0] * lam[0] - nrm1;
        double u0 = (lam[0] * r[loff] - dot1) / det;
        out[loff] = u0;
        for (std::int32_t i = 1; i < d; ++i) out[loff + i] = (r[loff + i] - u0 * lam[i]) / lam[0];
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        const VectorXd& sig = psd_[c].sigma;
        MatrixXd R;
        svec_to_mat(r.data() + loff, k, R);
        for (std::int32_t i = 0; i < k; ++i)
            for (std::int32_t j = 0; j < k; ++j) R(i, j) *= 2.0 / (sig[i] + sig[j]);
        mat_to_svec(R, out.data() + loff);
    }
    return out;
}

double NTScaling::max_step(const VectorXd& v, const VectorXd& dv) const {
    const StdForm& sf = *sf_;
    double alpha = std::numeric_limits<double>::infinity();
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        std::int32_t li = sf.nonneg_begin - sf.num_free + i;
        if (dv[li] < 0) alpha = std::min(alpha, -v[li] / dv[li]);
    }
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t d = sf.soc_dims[c], loff = sf.soc_begin[c] - sf.num_free;
        // boundary: (v0 + a d0)^2 = ||v1 + a d1||^2, smallest positive root
        double a2 = dv[loff] * dv[loff], a1 = v[loff] * dv[loff], a0 = v[loff] * v[loff];
        for (std::int32_t i = 1; i < d; ++i) {
            a2 -= dv[loff + i] * dv[loff + i];
            a1 -= v[loff + i] * dv[loff + i];
            a0 -= v[loff + i] * v[loff + i];
        }
        // also the hyperplane v0 + a d0 = 0
        double lim = std::numeric_limits<double>::infinity();
        if (dv[loff] < 0) lim = -v[loff] / dv[loff];
        double disc = a1 * a1 - a0 * a2;
        if (disc >= 0) {
            double sdisc = std::sqrt(disc);
            for (double root : {a2 == 0.0 ? (a1 < 0 ? -a0 / (2 * a1) : lim)
                                          : (-a1 - sdisc) / a2,
                                a2 == 0.0 ? lim : (-a1 + sdisc) / a2}) {
                if (root > 1e-300 && root < lim) lim = root;
            }
        }
        alpha = std::min(alpha, lim);
    }
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        MatrixXd V, D;
        svec_to_mat(v.data() + loff, k, V);
        svec_to_mat(dv.data() + loff, k, D);
        Eigen::LLT<MatrixXd> llt(V);
        if (llt.info() != Eigen::Success) return 0.0;
        MatrixXd L = llt.matrixL();
        MatrixXd S = L.triangularView<Eigen::Lower>().solve(D);
        S = L.triangularView<Eigen::Lower>().solve(S.transpose().eval());
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (S + S.transpose()),
                                                   Eigen::EigenvaluesOnly);
        double emin = es.eigenvalues().minCoeff();
        if (emin < 0) alpha = std::min(alpha, -1.0 / emin);
    }
    return alpha;
}

VectorXd NTScaling::identity() const {
    const StdForm& sf = *sf_;
    VectorXd e = VectorXd::Zero(sf.cone_dim);
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i)
        e[sf.nonneg_begin - sf.num_free + i] = 1.0;
    for (std::size_t c = 0; c < sf.soc_dims.size(); ++c) e[sf.soc_begin[c] - sf.num_free] = 1.0;
    for (std::size_t c = 0; c < sf.psd_dims.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], loff = sf.psd_begin[c] - sf.num_free;
        std::size_t idx = 0;
        for (std::int32_t i = 0; i < k; ++i)
            for (std::int32_t j = i; j < k; ++j, ++idx)
                if (i == j) e[loff + idx] = 1.0;
    }
    return e;
}

void NTScaling::accumulate_schur(const std::vector<SparseCol>& cols, MatrixXd& m) const {
    const StdForm& sf = *sf_;
    // nonneg: sum w_i^2 a_i a_i'
    for (std::int32_t i = 0; i < sf.num_nonneg; ++i) {
        const SparseCol& col = cols[sf.nonneg_begin + i];
        double w2 = nonneg_w_[i] * nonneg_w_[i];
        for (std::size_t a = 0; a < col.row.size(); ++a) {
            double f = w2 * col.val[a];
            std::int32_t ra = col.row[a];
            for (std::size_t bidx = 0; bidx < col.row.size(); ++bidx) {
                std::int32_t rb = col.row[bidx];
                if (rb >= ra) m(ra, rb) += f * col.val[bidx];
            }
        }
    }
    // soc: eta^2 (2 (A wbar)(A wbar)' - A J A')
    for (std::size_t c = 0; c < soc_.size(); ++c) {
        std::int32_t d = sf.soc_dims[c], off = sf.soc_begin[c];
        double eta2 = soc_[c].eta * soc_[c].eta;
        std::map<std::int32_t, double> u;  // A_block wbar (sparse, ordered)
        for (std::int32_t i = 0; i < d; ++i) {
            const SparseCol& col = cols[off + i];
            double wi = soc_[c].wbar[i];
            double sgn = i == 0 ? -1.0 : 1.0;  // -A J A' contribution
            for (std::size_t a = 0; a < col.row.size(); ++a) {
                u[col.row[a]] += wi * col.val[a];
                double f = sgn * eta2 * col.val[a];
                std::int32_t ra = col.row[a];
                for (std::size_t bidx = 0; bidx < col.row.size(); ++bidx) {
                    std::int32_t rb = col.row[bidx];
                    if (rb >= ra) m(ra, rb) += f * col.val[bidx];
                }
            }
        }
        std::vector<std::int32_t> ui;
        std::vector<double> uv;
        for (auto& [r, vvv] : u) {
            ui.push_back(r);
            uv.push_back(vvv);
        }
        for (std::size_t a = 0; a < ui.size(); ++a) {
            double f = 2.0 * eta2 * uv[a];
            for (std::size_t bidx = a; bidx < ui.size(); ++bidx)
                m(ui[a], ui[bidx]) += f * uv[bidx];
        }
    }
    // psd: symmetric Kronecker congruence with T, iterated over svec pairs
    for (std::size_t c = 0; c < psd_.size(); ++c) {
        std::int32_t k = sf.psd_dims[c], off = sf.psd_begin[c];
        const MatrixXd& T = psd_[c].T;
        const double sqrt2 = std::sqrt(2.0);
        std::size_t svlen = static_cast<std::size_t>(k) * (k + 1) / 2;
        std::size_t idx1 = 0;
        for (std::int32_t a = 0; a < k; ++a) {
            for (std::int32_t b = a; b < k; ++b, ++idx1) {
                const SparseCol& col1 = cols[off + idx1];
                if (col1.row.empty()) continue;
                const double* Ta = T.data() + static_cast<std::ptrdiff_t>(a) * k;
                const double* Tb = T.data() + static_cast<std::ptrdiff_t>(b) * k;
                std::size_t idx2 = idx1;
                for (std::int32_t cc = a; cc < k; ++cc) {
                    std::int32_t dd0 = cc == a ? b : cc;
                    std::size_t base = static_cast<std::size_t>(cc) * k -
                                       static_cast<std::size_t>(cc) * (cc - 1) / 2;
                    for (std::int32_t dd = dd0; dd < k; ++dd, ++idx2) {
                        const SparseCol& col2 = cols[off + base + (dd - cc)];
                        if (col2.row.empty()) continue;
                        // G entry for svec pairs (a,b),(cc,dd)
                        double g;
                        if (a == b && cc == dd)
                            g = Ta[cc] * Ta[cc];
                        else if (a == b)
                            g = sqrt2 * Ta[cc] * Ta[dd];
                        else if (cc == dd)
                            g = sqrt2 * Ta[cc] * Tb[cc];
                        else
                            g = Ta[cc] * Tb[dd] + Ta[dd] * Tb[cc];
                        if (g == 0.0) continue;
                        // idx2 == idx1 iterates the ordered pair once (skip
                        // rb < ra); idx2 > idx1 stands for both ordered pairs,
                        // which collapse onto one update except on the
                        // diagonal, where both land in the same entry.
                        for (std::size_t ia = 0; ia < col1.row.size(); ++ia) {
                            double f = g * col1.val[ia];
                            std::int32_t ra = col1.row[ia];
                            for (std::size_t ib = 0; ib < col2.row.size(); ++ib) {
                                std::int32_t rb = col2.row[ib];
                                double amt = f * col2.val[ib];
                                if (idx2 == idx1) {
                                    if (rb < ra) continue;
                                    m(ra, rb) += amt;
                                } else if (ra == rb) {
                                    m(ra, ra) += 2.0 * amt;
                                } else if (rb > ra) {
                                    m(ra, rb) += amt;
                                } else {
                                    m(rb, ra) += amt;
                                }
                            }
                        }
                    }
                }
            }
        }
        (void)svlen;
    }
}

}  // namespace polyopt::detail
