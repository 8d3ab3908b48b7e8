#include "polyopt/gram.hpp"

#include <set>
#include <stdexcept>

namespace polyopt {

GramTemplate::GramTemplate(std::vector<Monomial> basis) : basis_(std::move(basis)) {
    std::set<Monomial> distinct(basis_.begin(), basis_.end());
    if (distinct.size() != basis_.size())
        throw std::invalid_argument("duplicate basis monomials in Gram template");
    const auto k = static_cast<std::int32_t>(basis_.size());
    for (std::int32_t i = 0; i < k; ++i)
        for (std::int32_t j = i; j < k; ++j) {
            Monomial prod = basis_[i] * basis_[j];
            expansion_[prod].push_back(Entry{i, j, i == j ? 1 : 2});
        }
}

GramTemplate gram_template(std::vector<Monomial> basis) { return GramTemplate(std::move(basis)); }

}  // namespace polyopt
