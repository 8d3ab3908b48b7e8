#include "polyopt/hierarchy.hpp"

#include <map>

namespace polyopt {

std::string family_name(Family f) { return f == Family::QM ? "qm" : "po"; }

std::string hierarchy_name(const HierarchySpec& spec) {
    std::string cone = spec.cone == GramCone::Scalar ? "lp" : gram_cone_name(spec.cone);
    return family_name(spec.family) + "-" + cone;
}

Polynomial multiplier_base(const PopInstance& inst) {
    Polynomial base = Polynomial::constant(inst.n, Rational(1));
    for (std::size_t i = 0; i < inst.n; ++i) base += Polynomial::variable(inst.n, i);
    for (const auto& g : inst.constraints) base += g;
    return base;
}

int dhat(const PopInstance& inst, const HierarchySpec& spec) {
    if (spec.family == Family::QM) return 2 * spec.r;
    int g = inst.constraints.empty() ? 1 : std::max(1, inst.max_constraint_degree());
    return spec.r * g + inst.degree();
}

int level_for_dhat(const PopInstance& inst, Family family, int dhat_target) {
    if (family == Family::QM) {
        if (dhat_target % 2 != 0 || dhat_target < 2)
            throw std::invalid_argument("QM dhat must be a positive even degree");
        return dhat_target / 2;
    }
    int g = inst.constraints.empty() ? 1 : std::max(1, inst.max_constraint_degree());
    int d = inst.degree();
    if (dhat_target < d || (dhat_target - d) % g != 0)
        throw std::invalid_argument("no PO level has dhat " + std::to_string(dhat_target) +
                                    " (d=" + std::to_string(d) + ", step " + std::to_string(g) +
                                    ")");
    return (dhat_target - d) / g;
}

namespace {

using RowMap = std::map<Monomial, std::map<std::int32_t, Rational>>;

/// Adds the expansion of one multiplier block times its carrier into rows.
void accumulate_block(const GramTemplate& templ, const GramBlockHandle& handle,
                      const Polynomial& carrier, RowMap& rows) {
    for (const auto& [gmono, entries] : templ.expansion()) {
        for (const auto& e : entries) {
            std::int32_t var = handle.q_vars[templ.tri_index(e.row, e.col)];
            for (const auto& [cmono, ccoef] : carrier.terms()) {
                rows[gmono * cmono][var] += Rational(e.multiplicity) * ccoef;
            }
        }
    }
}

/// g(x)^beta with memoization over beta prefixes.
class CarrierCache {
  public:
    explicit CarrierCache(const std::vector<Polynomial>& gs, std::size_t n) : gs_(gs) {
        cache_[std::vector<int>(gs.size(), 0)] = Polynomial::constant(n, Rational(1));
    }

    const Polynomial& power(const std::vector<int>& beta) {
        auto it = cache_.find(beta);
        if (it != cache_.end()) return it->second;
        std::size_t j = beta.size();
        while (j > 0 && beta[j - 1] == 0) --j;
        std::vector<int> prev = beta;
        --prev[j - 1];
        Polynomial value = power(prev) * gs_[j - 1];
        return cache_.emplace(beta, std::move(value)).first->second;
    }

  private:
    const std::vector<Polynomial>& gs_;
    std::map<std::vector<int>, Polynomial> cache_;
};

/// Facial reduction of the block plan: a zero row whose entries are all
/// diagonal Gram positions with one sign forces those diagonal entries (and
/// hence their Gram rows/columns) to vanish; shrink the bases accordingly and
/// iterate. Keeps the optimum while restoring an interior point, which the
/// degenerate instances here otherwise lack.
void reduce_plan(const Polynomial& lhs_f, const Polynomial& lhs_base,
                 std::vector<MultiplierBlock>& plan) {
    struct Term {
        std::size_t block;
        std::int32_t i, j;
        Rational coef;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<Monomial, std::vector<Term>> rows;
        for (std::size_t b = 0; b < plan.size(); ++b) {
            GramTemplate templ(plan[b].basis);
            for (const auto& [gmono, entries] : templ.expansion())
                for (const auto& e : entries)
                    for (const auto& [cmono, ccoef] : plan[b].carrier.terms())
                        rows[gmono * cmono].push_back(
                            {b, e.row, e.col, Rational(e.multiplicity) * ccoef});
        }
        std::vector<std::vector<char>> drop(plan.size());
        for (std::size_t b = 0; b < plan.size(); ++b) drop[b].assign(plan[b].basis.size(), 0);
        bool any = false;
        for (const auto& [mono, terms] : rows) {
            if (!lhs_f.coefficient(mono).is_zero() || !lhs_base.coefficient(mono).is_zero())
                continue;
            bool pos = false, neg = false, clean = true;
            for (const auto& t : terms) {
                if (t.i != t.j) {
                    clean = false;
                    break;
                }
                (t.coef > Rational(0) ? pos : neg) = true;
            }
            if (!clean || (pos && neg)) continue;
            for (const auto& t : terms) {
                if (!drop[t.block][t.i]) {
                    drop[t.block][t.i] = 1;
                    any = true;
                }
            }
        }
        if (!any) break;
        for (std::size_t b = 0; b < plan.size(); ++b) {
            std::vector<Monomial> keep;
            for (std::size_t i = 0; i < plan[b].basis.size(); ++i)
                if (!drop[b][i]) keep.push_back(plan[b].basis[i]);
            if (keep.size() != plan[b].basis.size()) {
                plan[b].basis = std::move(keep);
                changed = true;
            }
        }
        std::erase_if(plan, [](const MultiplierBlock& blk) { return blk.basis.empty(); });
    }
}

BuildResult assemble(const PopInstance& inst, const HierarchySpec& spec, const Polynomial& lhs_base,
                     std::vector<MultiplierBlock> block_plan) {
    BuildResult out;
    out.decoder.spec = spec;
    out.decoder.lhs_base = lhs_base;
    ConicProgram& cp = out.program;
    reduce_plan(lhs_base * inst.objective, lhs_base, block_plan);
    RowMap rows;
    for (auto& blk : block_plan) {
        GramTemplate templ(blk.basis);
        blk.handle = encode_gram(templ, blk.handle.cone, cp);
        accumulate_block(templ, blk.handle, blk.carrier, rows);
        out.decoder.blocks.push_back(blk);
    }
    std::int32_t lambda = cp.new_var();
    out.decoder.lambda_var = lambda;
    cp.maximize = true;
    cp.set_objective_term(lambda, 1.0);

    Polynomial lhs_f = lhs_base * inst.objective;
    // one equality row per monomial on either side
    std::map<Monomial, char> support;
    for (const auto& [m, _] : rows) support[m] = 1;
    for (const auto& [m, _] : lhs_f.terms()) support[m] = 1;
    for (const auto& [m, _] : lhs_base.terms()) support[m] = 1;
    for (const auto& [mono, _] : support) {
        LinearRow row;
        auto it = rows.find(mono);
        if (it != rows.end())
            for (const auto& [var, coef] : it->second) row.add(var, coef.to_double());
        Rational lam_coef = lhs_base.coefficient(mono);
        if (!lam_coef.is_zero()) row.add(lambda, lam_coef.to_double());
        row.rhs = lhs_f.coefficient(mono).to_double();
        cp.rows.push_back(std::move(row));
    }
    return out;
}

BuildResult build_po(const PopInstance& inst, const HierarchySpec& spec) {
    if (!inst.all_nonneg())
        throw std::invalid_argument(
            "the PO family needs every variable declared nonnegative (S within R^n_+)");
    if (spec.r < 0) throw std::invalid_argument("negative level");
    const std::size_t n = inst.n;
    const auto& gs = inst.constraints;
    std::vector<int> weights(gs.size());
    for (std::size_t j = 0; j < gs.size(); ++j) weights[j] = std::max(1, gs[j].degree());
    int gmax = gs.empty() ? 1 : std::max(1, inst.max_constraint_degree());

    const int budget = spec.r * gmax + inst.degree();
    std::vector<CarrierIndex> carriers = weighted_index_set(n, weights, budget);
    if (carriers.empty()) throw EmptyIndexSet("no carriers within budget");

    CarrierCache cache(gs, n);
    std::vector<Monomial> deg2_basis = monomials_up_to(n, 1);
    std::vector<Monomial> scalar_basis = {Monomial::one(n)};

    std::vector<MultiplierBlock> plan;
    plan.reserve(carriers.size());
    for (const auto& ci : carriers) {
        int weight = ci.alpha.degree();
        for (std::size_t j = 0; j < ci.beta.size(); ++j) weight += ci.beta[j] * weights[j];
        MultiplierBlock blk;
        blk.index = ci;
        blk.carrier = Polynomial::monomial(ci.alpha) * cache.power(ci.beta);
        bool gram = spec.cone != GramCone::Scalar && budget - weight >= 2;
        blk.basis = gram ? deg2_basis : scalar_basis;
        blk.handle.cone = gram ? spec.cone : GramCone::Scalar;
        if (blk.carrier.is_zero()) continue;  // a degree-0 constraint could vanish
        plan.push_back(std::move(blk));
    }
    Polynomial lhs_base = multiplier_base(inst).pow(spec.r);
    return assemble(inst, spec, lhs_base, std::move(plan));
}

BuildResult build_qm(const PopInstance& inst, const HierarchySpec& spec) {
    if (spec.cone == GramCone::Scalar)
        throw std::invalid_argument("the QM family has no scalar-multiplier variant");
    const int d = inst.degree();
    if (2 * spec.r < d)
        throw LevelTooSmall("QM level r=" + std::to_string(spec.r) + " below ceil(d/2) for d=" +
                            std::to_string(d));
    const std::size_t n = inst.n;
    std::vector<Polynomial> gs = inst.constraints;
    for (std::size_t i = 0; i < n; ++i)
        if (inst.nonneg[i]) gs.push_back(Polynomial::variable(n, i));

    std::vector<MultiplierBlock> plan;
    {
        MultiplierBlock s0;
        s0.carrier = Polynomial::constant(n, Rational(1));
        s0.basis = monomials_up_to(n, spec.r);
        s0.handle.cone = spec.cone;
        s0.constraint_index = -1;
        plan.push_back(std::move(s0));
    }
    for (std::size_t i = 0; i < gs.size(); ++i) {
        int deg = gs[i].degree();
        int k = spec.r - (deg + 1) / 2;
        if (k < 0) continue;  // multiplier degree rule drops this constraint at level r
        MultiplierBlock blk;
        blk.carrier = gs[i];
        blk.basis = monomials_up_to(n, k);
        blk.handle.cone = spec.cone;
        blk.constraint_index = static_cast<int>(i);
        plan.push_back(std::move(blk));
    }
    Polynomial one = Polynomial::constant(n, Rational(1));
    return assemble(inst, spec, one, std::move(plan));
}

}  // namespace

BuildResult build_hierarchy(const PopInstance& inst, const HierarchySpec& spec) {
    return spec.family == Family::PO ? build_po(inst, spec) : build_qm(inst, spec);
}

}  // namespace polyopt
