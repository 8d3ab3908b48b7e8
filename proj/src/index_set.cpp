#include "polyopt/index_set.hpp"

#include <algorithm>

namespace polyopt {

namespace {

void enumerate_weighted(std::size_t n, const std::vector<int>& w, std::size_t pos, int remaining,
                        std::vector<int>& exp, std::vector<CarrierIndex>& out) {
    const std::size_t total = n + w.size();
    if (pos == total) {
        CarrierIndex ci;
        ci.alpha = Monomial(std::vector<int>(exp.begin(), exp.begin() + n));
        ci.beta.assign(exp.begin() + n, exp.end());
        out.push_back(std::move(ci));
        return;
    }
    int weight = pos < n ? 1 : std::max(1, w[pos - n]);
    for (int e = 0; e * weight <= remaining; ++e) {
        exp[pos] = e;
        enumerate_weighted(n, w, pos + 1, remaining - e * weight, exp, out);
    }
    exp[pos] = 0;
}

void sort_graded_lex(std::size_t n, std::vector<CarrierIndex>& v) {
    std::stable_sort(v.begin(), v.end(), [n](const CarrierIndex& a, const CarrierIndex& b) {
        int la = a.l1(), lb = b.l1();
        if (la != lb) return la < lb;
        if (a.alpha.exponents() != b.alpha.exponents())
            return a.alpha.exponents() > b.alpha.exponents();
        return a.beta > b.beta;
    });
}

}  // namespace

std::vector<CarrierIndex> index_set(const PopInstance& inst, int r, IndexVariant variant) {
    int max_deg_g = inst.constraints.empty() ? 1 : inst.max_constraint_degree();
    int budget = r * max_deg_g + inst.objective.degree();
    if (variant == IndexVariant::IPrime) budget -= 2;
    if (budget < 0)
        throw NegativeBudget("index set budget " + std::to_string(budget) + " is negative");
    std::vector<int> unit_weights(inst.constraints.size(), 1);
    std::vector<int> exp(inst.n + inst.constraints.size(), 0);
    std::vector<CarrierIndex> out;
    enumerate_weighted(inst.n, unit_weights, 0, budget, exp, out);
    sort_graded_lex(inst.n, out);
    return out;
}

std::vector<CarrierIndex> weighted_index_set(std::size_t n, const std::vector<int>& weights,
                                             int budget) {
    std::vector<CarrierIndex> out;
    if (budget < 0) return out;
    std::vector<int> exp(n + weights.size(), 0);
    enumerate_weighted(n, weights, 0, budget, exp, out);
    sort_graded_lex(n, out);
    return out;
}

}  // namespace polyopt
