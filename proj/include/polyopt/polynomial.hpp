#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyopt/monomial.hpp"
#include "polyopt/rational.hpp"

namespace polyopt {

/// Sparse multivariate polynomial: monomial -> coefficient, normalized so no
/// zero coefficient is ever stored. Coeff is Rational for exact construction
/// and coefficient matching, double for numeric verification work.
template <class Coeff>
class PolynomialT {
  public:
    using Terms = std::map<Monomial, Coeff>;

    PolynomialT() = default;
    explicit PolynomialT(std::size_t n) : n_(n) {}
    PolynomialT(std::size_t n, const Coeff& constant) : n_(n) {
        add_term(Monomial::one(n), constant);
    }

    static PolynomialT constant(std::size_t n, const Coeff& c) { return PolynomialT(n, c); }
    static PolynomialT variable(std::size_t n, std::size_t i) {
        PolynomialT p(n);
        p.add_term(Monomial::var(n, i), Coeff(1));
        return p;
    }
    static PolynomialT monomial(Monomial m, const Coeff& c = Coeff(1)) {
        PolynomialT p(m.num_vars());
        p.add_term(std::move(m), c);
        return p;
    }

    std::size_t num_vars() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    Coeff coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    void add_term(Monomial m, const Coeff& c) {
        if (m.num_vars() != n_) throw std::invalid_argument("monomial dimension mismatch");
        auto [it, inserted] = terms_.emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second == Coeff(0)) terms_.erase(it);
        } else if (c == Coeff(0)) {
            terms_.erase(it);
        }
    }

    PolynomialT& operator+=(const PolynomialT& o) {
        check_dims(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    PolynomialT& operator-=(const PolynomialT& o) {
        check_dims(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend PolynomialT operator+(PolynomialT a, const PolynomialT& b) { return a += b; }
    friend PolynomialT operator-(PolynomialT a, const PolynomialT& b) { return a -= b; }

    PolynomialT operator-() const {
        PolynomialT r(n_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend PolynomialT operator*(const PolynomialT& a, const PolynomialT& b) {
        a.check_dims(b);
        PolynomialT r(a.n_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }

    PolynomialT& operator*=(const Coeff& c) {
        if (c == Coeff(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend PolynomialT operator*(PolynomialT p, const Coeff& c) { return p *= c; }
    friend PolynomialT operator*(const Coeff& c, PolynomialT p) { return p *= c; }

    /// p^r by iterated sparse multiplication; p^0 = 1.
    PolynomialT pow(int r) const {
        if (r < 0) throw std::invalid_argument("negative power");
        PolynomialT result = constant(n_, Coeff(1));
        for (int i = 0; i < r; ++i) result = result * *this;
        return result;
    }

    template <class Point>
    auto eval(const std::vector<Point>& x) const -> Point {
        if (x.size() != n_) throw std::invalid_argument("evaluation point dimension mismatch");
        Point total(0);
        for (const auto& [m, c] : terms_) {
            Point term = coeff_as<Point>(c);
            for (std::size_t i = 0; i < n_; ++i)
                for (int e = 0; e < m.exponent(i); ++e) term *= x[i];
            total += term;
        }
        return total;
    }

    friend bool operator==(const PolynomialT& a, const PolynomialT& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    std::string str() const;

  private:
    template <class Point>
    static Point coeff_as(const Coeff& c) {
        if constexpr (std::is_same_v<Point, double> && std::is_same_v<Coeff, Rational>)
            return c.to_double();
        else
            return Point(c);
    }

    void check_dims(const PolynomialT& o) const {
        if (n_ != o.n_) throw std::invalid_argument("polynomial dimension mismatch");
    }

    std::size_t n_ = 0;
    Terms terms_;
};

using Polynomial = PolynomialT<Rational>;
using PolynomialD = PolynomialT<double>;

/// Exact conversion (Rational coefficients to double).
PolynomialD to_double_poly(const Polynomial& p);

/// All monomials in n variables of total degree <= d, in graded-lex order.
std::vector<Monomial> monomials_up_to(std::size_t n, int d);

}  // namespace polyopt
