#pragma once

#include <map>
#include <vector>

#include "polyopt/polynomial.hpp"

namespace polyopt {

/// Expansion template of z(x)^T Q z(x) for a fixed monomial basis z(x).
/// For each monomial mu of the expansion it records the upper-triangle
/// positions (i <= j) with m_i * m_j = mu and the multiplicity of Q_ij in
/// the coefficient of mu (1 on the diagonal, 2 off the diagonal).
class GramTemplate {
  public:
    struct Entry {
        std::int32_t row;
        std::int32_t col;
        int multiplicity;
    };

    explicit GramTemplate(std::vector<Monomial> basis);

    const std::vector<Monomial>& basis() const { return basis_; }
    std::int32_t size() const { return static_cast<std::int32_t>(basis_.size()); }
    const std::map<Monomial, std::vector<Entry>>& expansion() const { return expansion_; }

    /// Expands the polynomial z^T Q z for an explicit symmetric Q given as
    /// the upper triangle in row-major packing (test/verification path).
    template <class Coeff>
    PolynomialT<Coeff> expand(const std::vector<Coeff>& q_upper) const {
        PolynomialT<Coeff> p(basis_.empty() ? 0 : basis_[0].num_vars());
        for (const auto& [mono, entries] : expansion_)
            for (const auto& e : entries) {
                std::size_t idx = tri_index(e.row, e.col);
                p.add_term(mono, Coeff(e.multiplicity) * q_upper.at(idx));
            }
        return p;
    }

    std::size_t tri_index(std::int32_t i, std::int32_t j) const {
        if (i > j) std::swap(i, j);
        std::size_t k = basis_.size();
        return static_cast<std::size_t>(i) * k - static_cast<std::size_t>(i) * (i - 1) / 2 +
               (j - i);
    }

  private:
    std::vector<Monomial> basis_;
    std::map<Monomial, std::vector<Entry>> expansion_;
};

/// gram_template(basis) with duplicate detection.
GramTemplate gram_template(std::vector<Monomial> basis);

}  // namespace polyopt
