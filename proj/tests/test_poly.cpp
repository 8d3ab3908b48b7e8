#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyopt/instance_io.hpp"
#include "polyopt/polynomial.hpp"

using namespace polyopt;

namespace {

Polynomial X(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial C(std::size_t n, std::int64_t c) { return Polynomial::constant(n, Rational(c)); }

Rational eval_at(const Polynomial& p, const std::vector<Rational>& x) { return p.eval(x); }

std::vector<Rational> random_point(std::size_t n, std::uint64_t& state) {
    std::vector<Rational> x;
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t num = static_cast<std::int64_t>(splitmix64(state) % 19) - 9;
        std::int64_t den = 1 + static_cast<std::int64_t>(splitmix64(state) % 4);
        x.emplace_back(num, den);
    }
    return x;
}

Polynomial random_poly(std::size_t n, int max_deg, int terms, std::uint64_t& state) {
    Polynomial p(n);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> exp(n, 0);
        int budget = static_cast<int>(splitmix64(state) % (max_deg + 1));
        for (std::size_t i = 0; i < n && budget > 0; ++i) {
            int e = static_cast<int>(splitmix64(state) % (budget + 1));
            exp[i] = e;
            budget -= e;
        }
        std::int64_t c = static_cast<std::int64_t>(splitmix64(state) % 11) - 5;
        p.add_term(Monomial(exp), Rational(c));
    }
    return p;
}

}  // namespace

TEST_CASE("rational arithmetic is exact and normalized") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational::parse("47.5") == Rational(95, 2));
    CHECK(Rational::parse("-0.36") == Rational(-9, 25));
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    Rational big(1, 1);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 100; ++i) big *= Rational(1000003, 1);
        }(),
        RationalOverflow);
}

TEST_CASE("monomial ordering is graded lexicographic") {
    Monomial one = Monomial::one(2);
    Monomial x = Monomial::var(2, 0);
    Monomial y = Monomial::var(2, 1);
    CHECK(one < x);
    CHECK(x < y);        // same degree, x1-heavy first
    CHECK(y < x * x);    // degree decides first
    CHECK(x * x < x * y);
    CHECK((x * y).degree() == 2);
}

TEST_CASE("poly_add matches the worked examples") {
    // (1+x) + (1-x) = 2
    Polynomial a = C(1, 1) + X(1, 0);
    Polynomial b = C(1, 1) - X(1, 0);
    CHECK(a + b == C(1, 2));
    // p + 0 = p
    Polynomial zero(1);
    CHECK(a + zero == a);
    // (x^2 - 2x) + (2x + 3) = x^2 + 3, checked at random points as well
    Polynomial p = X(1, 0) * X(1, 0) - C(1, 2) * X(1, 0);
    Polynomial q = C(1, 2) * X(1, 0) + C(1, 3);
    Polynomial sum = p + q;
    CHECK(sum == X(1, 0) * X(1, 0) + C(1, 3));
    std::uint64_t state = 7;
    for (int i = 0; i < 3; ++i) {
        auto pt = random_point(1, state);
        CHECK(eval_at(sum, pt) == eval_at(p, pt) + eval_at(q, pt));
    }
    CHECK_THROWS(a + X(2, 0));
}

TEST_CASE("poly_mul matches the worked examples") {
    Polynomial one_plus = C(1, 1) + X(1, 0);
    Polynomial one_minus = C(1, 1) - X(1, 0);
    CHECK(one_plus * one_minus == C(1, 1) - X(1, 0) * X(1, 0));
    CHECK(one_plus * C(1, 1) == one_plus);
    // (1+x+y)^2 via the multinomial theorem
    Polynomial s = C(2, 1) + X(2, 0) + X(2, 1);
    Polynomial sq = s * s;
    CHECK(sq.coefficient(Monomial::one(2)) == Rational(1));
    CHECK(sq.coefficient(Monomial::var(2, 0)) == Rational(2));
    CHECK(sq.coefficient(Monomial::var(2, 1)) == Rational(2));
    CHECK(sq.coefficient(Monomial::var(2, 0, 2)) == Rational(1));
    CHECK(sq.coefficient(Monomial::var(2, 0) * Monomial::var(2, 1)) == Rational(2));
    CHECK(sq.coefficient(Monomial::var(2, 1, 2)) == Rational(1));
    CHECK(sq.term_count() == 6);
}

TEST_CASE("poly_pow by iterated multiplication") {
    Polynomial p = C(1, 1) + X(1, 0);
    CHECK(p.pow(0) == C(1, 1));
    Polynomial p2 = p.pow(2);
    CHECK(p2.coefficient(Monomial::var(1, 0)) == Rational(2));
    // (1 + x + x^2)^3 coefficients via a direct convolution oracle
    Polynomial q = C(1, 1) + X(1, 0) + X(1, 0) * X(1, 0);
    Polynomial q3 = q.pow(3);
    std::vector<std::int64_t> base = {1, 1, 1};
    std::vector<std::int64_t> conv = {1};
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<std::int64_t> next(conv.size() + base.size() - 1, 0);
        for (std::size_t i = 0; i < conv.size(); ++i)
            for (std::size_t j = 0; j < base.size(); ++j) next[i + j] += conv[i] * base[j];
        conv = next;
    }
    REQUIRE(conv.size() == 7);
    CHECK(conv == std::vector<std::int64_t>{1, 3, 6, 7, 6, 3, 1});
    for (int k = 0; k <= 6; ++k)
        CHECK(q3.coefficient(Monomial::var(1, 0, k)) == Rational(conv[k]));
    // deg(p^r) = r deg(p)
    CHECK(q3.degree() == 3 * q.degree());
}

TEST_CASE("poly_eval is exact on rationals") {
    Polynomial p = X(1, 0) * X(1, 0) - C(1, 2) * X(1, 0);
    CHECK(eval_at(p, {Rational(1)}) == Rational(-1));
    CHECK(eval_at(C(3, 42), {Rational(5), Rational(-1), Rational(7)}) == Rational(42));
    // embedded 5-variable objective at (0,0,1,0,2)
    PopInstance inst = embedded_instance(1);
    Rational v = inst.objective.eval(
        std::vector<Rational>{Rational(0), Rational(0), Rational(1), Rational(0), Rational(2)});
    CHECK(v == Rational(-1));
}

TEST_CASE("ring axioms hold on random sparse polynomials") {
    std::uint64_t state = 12345;
    for (int trial = 0; trial < 8; ++trial) {
        std::size_t n = 1 + trial % 3;
        Polynomial a = random_poly(n, 3, 4, state);
        Polynomial b = random_poly(n, 3, 4, state);
        Polynomial c = random_poly(n, 2, 3, state);
        Polynomial assoc_l = (a * b) * c;
        Polynomial assoc_r = a * (b * c);
        Polynomial dist_l = a * (b + c);
        Polynomial dist_r = a * b + a * c;
        CHECK(assoc_l == assoc_r);
        CHECK(dist_l == dist_r);
        for (int pt = 0; pt < 5; ++pt) {
            auto x = random_point(n, state);
            CHECK(eval_at(assoc_l, x) == eval_at(assoc_r, x));
            CHECK(eval_at(a * b, x) == eval_at(a, x) * eval_at(b, x));
        }
    }
}

TEST_CASE("no operation stores a zero coefficient") {
    std::uint64_t state = 99;
    for (int trial = 0; trial < 10; ++trial) {
        Polynomial a = random_poly(2, 3, 5, state);
        Polynomial b = random_poly(2, 3, 5, state);
        for (const auto& p : {a + b, a - b, a * b, a - a}) {
            for (const auto& [m, c] : p.terms()) CHECK(c != Rational(0));
        }
    }
}
