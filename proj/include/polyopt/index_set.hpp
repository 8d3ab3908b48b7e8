#pragma once

#include <stdexcept>
#include <vector>

#include "polyopt/pop.hpp"

namespace polyopt {

struct NegativeBudget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One carrier index: the pair (alpha, beta) of the product x^alpha g(x)^beta.
struct CarrierIndex {
    Monomial alpha;
    std::vector<int> beta;

    int l1() const {
        int s = alpha.degree();
        for (int b : beta) s += b;
        return s;
    }
};

enum class IndexVariant { I, IPrime };

/// All lattice pairs (alpha, beta) in N^(n+m) within an l1 budget of
///   r * max_i deg(g_i) + deg(f)        (variant I)
///   r * max_i deg(g_i) + deg(f) - 2    (variant I')
/// enumerated in graded-lex order of the concatenated exponent vector.
/// Throws NegativeBudget when the I' budget is negative.
std::vector<CarrierIndex> index_set(const PopInstance& inst, int r, IndexVariant variant);

/// All pairs with weighted degree |alpha| + sum_j beta_j * w_j <= budget,
/// graded-lex over the concatenated vector. Weights below 1 are clamped to 1.
std::vector<CarrierIndex> weighted_index_set(std::size_t n, const std::vector<int>& weights,
                                             int budget);

}  // namespace polyopt
