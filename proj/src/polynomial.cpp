#include "polyopt/polynomial.hpp"

#include <sstream>

namespace polyopt {

std::string Monomial::str() const {
    if (is_one()) return "1";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < exp_.size(); ++i) {
        if (!exp_[i]) continue;
        if (!first) os << " ";
        os << "x" << i + 1;
        if (exp_[i] > 1) os << "^" << exp_[i];
        first = false;
    }
    return os.str();
}

template <class Coeff>
std::string PolynomialT<Coeff>::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        if constexpr (std::is_same_v<Coeff, Rational>)
            os << c.str();
        else
            os << c;
        if (!m.is_one()) os << " * " << m.str();
        first = false;
    }
    return os.str();
}

template std::string PolynomialT<Rational>::str() const;
template std::string PolynomialT<double>::str() const;

PolynomialD to_double_poly(const Polynomial& p) {
    PolynomialD q(p.num_vars());
    for (const auto& [m, c] : p.terms()) q.add_term(m, c.to_double());
    return q;
}

namespace {
void enumerate(std::size_t n, std::size_t i, int remaining, std::vector<int>& exp,
               std::vector<Monomial>& out) {
    if (i == n) {
        out.emplace_back(exp);
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        exp[i] = e;
        enumerate(n, i + 1, remaining - e, exp, out);
    }
    exp[i] = 0;
}
}  // namespace

std::vector<Monomial> monomials_up_to(std::size_t n, int d) {
    std::vector<Monomial> out;
    if (d < 0) return out;
    std::vector<int> exp(n, 0);
    enumerate(n, 0, d, exp, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace polyopt
