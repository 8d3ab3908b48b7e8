#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyopt {

/// Exponent vector of a power product x^a = x_1^{a_1} ... x_n^{a_n}.
/// The length is always the ambient variable count, so equality of the
/// exponent vectors is equality of monomials.
class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(std::size_t n) : exp_(n, 0) {}
    explicit Monomial(std::vector<int> exponents) : exp_(std::move(exponents)) {
        for (int e : exp_)
            if (e < 0) throw std::invalid_argument("negative exponent");
    }

    static Monomial one(std::size_t n) { return Monomial(n); }
    static Monomial var(std::size_t n, std::size_t i, int power = 1) {
        Monomial m(n);
        m.exp_.at(i) = power;
        return m;
    }

    std::size_t num_vars() const { return exp_.size(); }
    int exponent(std::size_t i) const { return exp_[i]; }
    const std::vector<int>& exponents() const { return exp_; }
    int degree() const { return std::accumulate(exp_.begin(), exp_.end(), 0); }
    bool is_one() const {
        for (int e : exp_)
            if (e) return false;
        return true;
    }

    Monomial operator*(const Monomial& o) const {
        if (exp_.size() != o.exp_.size()) throw std::invalid_argument("monomial dimension mismatch");
        Monomial r(exp_.size());
        for (std::size_t i = 0; i < exp_.size(); ++i) r.exp_[i] = exp_[i] + o.exp_[i];
        return r;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp_ == b.exp_; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    /// Graded lexicographic order: total degree first, ties broken
    /// lexicographically from x_1. Fixed globally so every enumeration in the
    /// library is deterministic.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.exp_ > b.exp_;  // higher power of x_1 comes first within a degree
    }

    std::string str() const;

  private:
    std::vector<int> exp_;
};

}  // namespace polyopt
