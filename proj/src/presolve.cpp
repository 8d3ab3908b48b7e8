#include <algorithm>
#include <cmath>
#include <set>

#include "solver_internal.hpp"

namespace polyopt::detail {

namespace {

constexpr double kPivotRelTol = 1e-7;
constexpr int kMaxPivotRowNnz = 64;
constexpr int kMaxPivotColRows = 24;

struct Working {
    std::vector<std::map<std::int32_t, double>> rows;
    std::vector<double> rhs;
    std::vector<std::set<std::int32_t>> var_rows;
    std::vector<char> row_alive;
    std::vector<char> var_alive;
    std::vector<double> c;
    double offset = 0.0;
};

}  // namespace

PresolveResult presolve(const ConicProgram& cp) {
    cp.validate();
    PresolveResult out;
    out.minimize_negated = cp.maximize;

    const std::int32_t n = cp.num_vars;
    const auto p = static_cast<std::int32_t>(cp.rows.size());

    std::vector<VarClass> vclass(n, VarClass::Free);
    std::vector<double> vscale(n, 1.0);
    for (const auto& cone : cp.cones) {
        if (const auto* nn = std::get_if<NonnegCone>(&cone))
            for (auto v : nn->vars) vclass[v] = VarClass::Nonneg;
        else if (const auto* lc = std::get_if<LorentzCone>(&cone))
            for (auto v : lc->vars) vclass[v] = VarClass::Soc;
        else if (const auto* pc = std::get_if<PsdCone>(&cone)) {
            const std::int32_t k = pc->size;
            for (std::int32_t i = 0; i < k; ++i)
                for (std::int32_t j = i; j < k; ++j) {
                    auto v = pc->vars[ConicProgram::tri_index(k, i, j)];
                    vclass[v] = VarClass::Psd;
                    // internal svec variable: x_orig = x_int / sqrt(2) off-diagonal
                    vscale[v] = i == j ? 1.0 : 1.0 / std::sqrt(2.0);
                }
        }
    }

    Working w;
    w.rows.resize(p);
    w.rhs.resize(p);
    w.var_rows.resize(n);
    w.row_alive.assign(p, 1);
    w.var_alive.assign(n, 1);
    w.c.assign(n, 0.0);
    double sense = cp.maximize ? -1.0 : 1.0;
    for (std::size_t k = 0; k < cp.objective_index.size(); ++k)
        w.c[cp.objective_index[k]] += sense * cp.objective_coeff[k];
    for (std::int32_t r = 0; r < p; ++r) {
        w.rhs[r] = cp.rows[r].rhs;
        for (std::size_t k = 0; k < cp.rows[r].index.size(); ++k) {
            auto v = cp.rows[r].index[k];
            double a = cp.rows[r].coeff[k];
            if (a == 0.0) continue;
            auto [it, fresh] = w.rows[r].emplace(v, a);
            if (!fresh) it->second += a;
            w.var_rows[v].insert(r);
        }
        for (auto it = w.rows[r].begin(); it != w.rows[r].end();) {
            if (it->second == 0.0) {
                w.var_rows[it->first].erase(r);
                it = w.rows[r].erase(it);
            } else {
                ++it;
            }
        }
    }

    // Pivot out free variables while cheap pivots exist. The DD/SDD Gram
    // entries and their absolute-value auxiliaries all disappear here; the
    // hierarchy's lambda stays (its column is dense) and is handled by the
    // augmented KKT system instead.
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::int32_t v = 0; v < n; ++v) {
            if (!w.var_alive[v] || vclass[v] != VarClass::Free) continue;
            const auto& in_rows = w.var_rows[v];
            if (in_rows.empty()) continue;
            if (static_cast<int>(in_rows.size()) > kMaxPivotColRows) continue;
            std::int32_t best_row = -1;
            std::size_t best_nnz = kMaxPivotRowNnz + 1;
            for (auto r : in_rows) {
                double amax = 0.0;
                for (const auto& [var, a] : w.rows[r]) amax = std::max(amax, std::abs(a));
                double piv = std::abs(w.rows[r].at(v));
                if (piv < kPivotRelTol * amax) continue;
                if (w.rows[r].size() < best_nnz) {
                    best_nnz = w.rows[r].size();
                    best_row = r;
                }
            }
            if (best_row < 0) continue;
            // fill estimate: substituting into the other rows of the column
            if ((best_nnz - 1) * (in_rows.size() - 1) > 512) continue;

            Elimination e;
            e.var = v;
            e.row = best_row;
            e.pivot = w.rows[best_row].at(v);
            e.rhs = w.rhs[best_row];
            e.cvar = w.c[v];
            for (const auto& [var, a] : w.rows[best_row])
                if (var != v) e.row_terms.emplace_back(var, a);
            for (auto r : in_rows)
                if (r != best_row) e.col_terms.emplace_back(r, w.rows[r].at(v));

            // substitute x_v = (rhs - sum row_terms)/pivot everywhere
            for (const auto& [r, a] : e.col_terms) {
                double f = a / e.pivot;
                w.rhs[r] -= f * e.rhs;
                auto& row = w.rows[r];
                row.erase(v);
                for (const auto& [var, coef] : e.row_terms) {
                    auto [it, fresh] = row.emplace(var, -f * coef);
                    if (!fresh) {
                        it->second -= f * coef;
                        if (std::abs(it->second) < 1e-300) {
                            row.erase(it);
                            w.var_rows[var].erase(r);
                            continue;
                        }
                    } else {
                        w.var_rows[var].insert(r);
                    }
                }
            }
            if (e.cvar != 0.0) {
                double f = e.cvar / e.pivot;
                w.offset += f * e.rhs;
                for (const auto& [var, coef] : e.row_terms) w.c[var] -= f * coef;
            }
            for (const auto& [var, coef] : e.row_terms) w.var_rows[var].erase(best_row);
            w.rows[best_row].clear();
            w.row_alive[best_row] = 0;
            w.var_rows[v].clear();
            w.var_alive[v] = 0;
            out.eliminations.push_back(std::move(e));
            progress = true;
        }
    }

    // empty rows and free variables without any row
    for (std::int32_t r = 0; r < p; ++r)
        if (w.row_alive[r] && w.rows[r].empty()) {
            if (std::abs(w.rhs[r]) > 1e-12) out.trivially_infeasible = true;
            w.row_alive[r] = 0;
        }
    for (std::int32_t v = 0; v < n; ++v)
        if (w.var_alive[v] && vclass[v] == VarClass::Free && w.var_rows[v].empty()) {
            if (w.c[v] != 0.0) out.trivially_unbounded = true;
            w.var_alive[v] = 0;
            out.fixed_zero_vars.push_back(v);
        }

    // compile the standard form: [free | nonneg | soc | psd]
    StdForm& sf = out.form;
    std::vector<std::int32_t> to_int(n, -1);
    auto add_var = [&](std::int32_t v) {
        to_int[v] = sf.n++;
        sf.var_origin.push_back(v);
        sf.var_scale.push_back(vscale[v]);
    };
    for (std::int32_t v = 0; v < n; ++v)
        if (w.var_alive[v] && vclass[v] == VarClass::Free) add_var(v);
    sf.num_free = sf.n;
    sf.nonneg_begin = sf.n;
    for (const auto& cone : cp.cones)
        if (const auto* nn = std::get_if<NonnegCone>(&cone))
            for (auto v : nn->vars)
                if (w.var_alive[v]) add_var(v);
    sf.num_nonneg = sf.n - sf.nonneg_begin;
    for (const auto& cone : cp.cones)
        if (const auto* lc = std::get_if<LorentzCone>(&cone)) {
            sf.soc_begin.push_back(sf.n);
            sf.soc_dims.push_back(static_cast<std::int32_t>(lc->vars.size()));
            for (auto v : lc->vars) {
                if (!w.var_alive[v])
                    throw std::invalid_argument("presolve eliminated a cone variable");
                add_var(v);
            }
        }
    for (const auto& cone : cp.cones)
        if (const auto* pc = std::get_if<PsdCone>(&cone)) {
            sf.psd_begin.push_back(sf.n);
            sf.psd_dims.push_back(pc->size);
            for (auto v : pc->vars) {
                if (!w.var_alive[v])
                    throw std::invalid_argument("presolve eliminated a cone variable");
                add_var(v);
            }
        }
    sf.cone_dim = sf.n - sf.num_free;
    sf.barrier_degree = sf.num_nonneg;
    for (auto d : sf.soc_dims) {
        (void)d;
        sf.barrier_degree += 1;
    }
    for (auto k : sf.psd_dims) sf.barrier_degree += k;

    std::vector<std::int32_t> row_to_int(p, -1);
    for (std::int32_t r = 0; r < p; ++r)
        if (w.row_alive[r]) {
            row_to_int[r] = sf.p++;
            sf.row_origin.push_back(r);
        }
    sf.b = VectorXd::Zero(sf.p);
    sf.c = VectorXd::Zero(sf.n);
    sf.obj_offset = w.offset;
    sf.cols.resize(sf.n);
    for (std::int32_t r = 0; r < p; ++r) {
        if (!w.row_alive[r]) continue;
        std::int32_t ir = row_to_int[r];
        sf.b[ir] = w.rhs[r];
        for (const auto& [v, a] : w.rows[r]) {
            std::int32_t iv = to_int[v];
            sf.cols[iv].row.push_back(ir);
            sf.cols[iv].val.push_back(a * vscale[v]);
        }
    }
    for (std::int32_t v = 0; v < n; ++v)
        if (to_int[v] >= 0) sf.c[to_int[v]] = w.c[v] * vscale[v];

    // Ruiz equilibration: alternately scale rows and cone-blocks of columns
    // toward unit infinity norm. Cone blocks take one uniform factor so the
    // scaled variables still live in the same cone.
    sf.row_scale.assign(sf.p, 1.0);
    std::vector<std::pair<std::int32_t, std::int32_t>> col_groups;  // [begin, end)
    for (std::int32_t v = 0; v < sf.nonneg_begin + sf.num_nonneg; ++v) col_groups.emplace_back(v, v + 1);
    for (std::size_t c = 0; c < sf.soc_dims.size(); ++c)
        col_groups.emplace_back(sf.soc_begin[c], sf.soc_begin[c] + sf.soc_dims[c]);
    for (std::size_t c = 0; c < sf.psd_dims.size(); ++c)
        col_groups.emplace_back(sf.psd_begin[c],
                                sf.psd_begin[c] + sf.psd_dims[c] * (sf.psd_dims[c] + 1) / 2);
    for (int round = 0; round < 3; ++round) {
        std::vector<double> row_max(sf.p, 0.0);
        for (const auto& col : sf.cols)
            for (std::size_t k = 0; k < col.row.size(); ++k)
                row_max[col.row[k]] = std::max(row_max[col.row[k]], std::abs(col.val[k]));
        std::vector<double> rs(sf.p, 1.0);
        for (std::int32_t r = 0; r < sf.p; ++r)
            if (row_max[r] > 0) rs[r] = 1.0 / std::sqrt(row_max[r]);
        for (auto& col : sf.cols)
            for (std::size_t k = 0; k < col.row.size(); ++k) col.val[k] *= rs[col.row[k]];
        for (std::int32_t r = 0; r < sf.p; ++r) {
            sf.b[r] *= rs[r];
            sf.row_scale[r] *= rs[r];
        }
        for (const auto& [beg, end] : col_groups) {
            double cmax = 0.0;
            for (std::int32_t v = beg; v < end; ++v)
                for (double x : sf.cols[v].val) cmax = std::max(cmax, std::abs(x));
            if (cmax <= 0) continue;
            double cs = 1.0 / std::sqrt(cmax);
            for (std::int32_t v = beg; v < end; ++v) {
                for (auto& x : sf.cols[v].val) x *= cs;
                sf.c[v] *= cs;
                sf.var_scale[v] *= cs;
            }
        }
    }
    return out;
}

void recover_primal(const ConicProgram& cp, const PresolveResult& pr, const VectorXd& x_int,
                    std::vector<double>& x_orig, bool homogeneous) {
    x_orig.assign(cp.num_vars, 0.0);
    const StdForm& sf = pr.form;
    for (std::int32_t i = 0; i < sf.n; ++i)
        x_orig[sf.var_origin[i]] = x_int[i] * sf.var_scale[i];
    for (auto it = pr.eliminations.rbegin(); it != pr.eliminations.rend(); ++it) {
        double s = homogeneous ? 0.0 : it->rhs;
        for (const auto& [var, coef] : it->row_terms) s -= coef * x_orig[var];
        x_orig[it->var] = s / it->pivot;
    }
}

void recover_duals(const ConicProgram& cp, const PresolveResult& pr, const VectorXd& y_int,
                   const VectorXd& z_int, std::vector<double>& y_orig,
                   std::vector<double>& z_orig, bool homogeneous) {
    const StdForm& sf = pr.form;
    y_orig.assign(cp.rows.size(), 0.0);
    for (std::int32_t r = 0; r < sf.p; ++r)
        y_orig[sf.row_origin[r]] = y_int[r] * sf.row_scale[r];
    // Eliminated rows: stationarity of the eliminated column in the working
    // problem at elimination time gives pivot_row's dual. Reverse order makes
    // every later dual available when needed.
    for (auto it = pr.eliminations.rbegin(); it != pr.eliminations.rend(); ++it) {
        double s = homogeneous ? 0.0 : it->cvar;
        for (const auto& [row, coef] : it->col_terms) s -= coef * y_orig[row];
        y_orig[it->row] = s / it->pivot;
    }
    z_orig.assign(cp.num_vars, 0.0);
    for (std::int32_t i = 0; i < sf.n; ++i) {
        // z_orig = z_int / var_scale keeps the pairing dot(x_orig, z_orig)
        // equal to the internal dot(x_int, z_int).
        z_orig[sf.var_origin[i]] = z_int[i] / sf.var_scale[i];
    }
}

void svec_to_mat(const double* s, std::int32_t k, MatrixXd& out) {
    out.resize(k, k);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::size_t idx = 0;
    for (std::int32_t i = 0; i < k; ++i)
        for (std::int32_t j = i; j < k; ++j, ++idx) {
            double v = i == j ? s[idx] : s[idx] * inv_sqrt2;
            out(i, j) = v;
            out(j, i) = v;
        }
}

void mat_to_svec(const MatrixXd& m, double* s) {
    const double sqrt2 = std::sqrt(2.0);
    const auto k = static_cast<std::int32_t>(m.rows());
    std::size_t idx = 0;
    for (std::int32_t i = 0; i < k; ++i)
        for (std::int32_t j = i; j < k; ++j, ++idx) s[idx] = i == j ? m(i, j) : m(i, j) * sqrt2;
}

}  // namespace polyopt::detail
