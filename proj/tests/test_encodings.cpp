#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyopt/encodings.hpp"
#include "polyopt/instance_io.hpp"
#include "polyopt/solver.hpp"

using namespace polyopt;

namespace {

std::vector<Monomial> basis_1x(std::size_t n) { return monomials_up_to(n, 1); }

/// min c.v subject to the Gram block representing the fixed polynomial p:
/// feasibility probe for "p in cone".
Solution cone_membership(const Polynomial& p, GramCone cone) {
    ConicProgram cp;
    GramTemplate templ(basis_1x(p.num_vars()));
    GramBlockHandle h = encode_gram(templ, cone, cp);
    for (const auto& [mono, entries] : templ.expansion()) {
        LinearRow row;
        std::map<std::int32_t, double> acc;
        for (const auto& e : entries)
            acc[h.q_vars[templ.tri_index(e.row, e.col)]] += e.multiplicity;
        for (auto& [v, c] : acc) row.add(v, c);
        row.rhs = p.coefficient(mono).to_double();
        cp.rows.push_back(std::move(row));
    }
    cp.maximize = false;  // pure feasibility
    return solve(cp);
}

}  // namespace

TEST_CASE("gram template expansion matches the worked examples") {
    // basis (1, x): Q = [[1,-1],[-1,1]] represents (1-x)^2
    GramTemplate t(basis_1x(1));
    Polynomial p = t.expand(std::vector<Rational>{Rational(1), Rational(-1), Rational(1)});
    Polynomial expect =
        Polynomial::constant(1, Rational(1)) - Rational(2) * Polynomial::variable(1, 0) +
        Polynomial::variable(1, 0) * Polynomial::variable(1, 0);
    CHECK(p == expect);

    // basis (1): constant c
    GramTemplate t1({Monomial::one(3)});
    CHECK(t1.expand(std::vector<Rational>{Rational(7)}) ==
          Polynomial::constant(3, Rational(7)));

    // basis (1, x, y): monomial xy maps to entry (2,3) with multiplicity 2
    GramTemplate t2(basis_1x(2));
    Monomial xy = Monomial::var(2, 0) * Monomial::var(2, 1);
    const auto& entries = t2.expansion().at(xy);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].row == 1);
    CHECK(entries[0].col == 2);
    CHECK(entries[0].multiplicity == 2);

    CHECK_THROWS(GramTemplate({Monomial::one(1), Monomial::one(1)}));
}

TEST_CASE("gram faithfulness: template expansion equals direct multiplication") {
    std::uint64_t state = 5;
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto basis = monomials_up_to(n, 1 + trial % 2);
        GramTemplate t(basis);
        std::size_t len = basis.size() * (basis.size() + 1) / 2;
        std::vector<Rational> q;
        for (std::size_t i = 0; i < len; ++i)
            q.emplace_back(static_cast<std::int64_t>(splitmix64(state) % 9) - 4);
        Polynomial via_template = t.expand(q);
        Polynomial direct(n);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j) {
                Rational qq = q[t.tri_index(static_cast<std::int32_t>(std::min(i, j)),
                                            static_cast<std::int32_t>(std::max(i, j)))];
                direct += Polynomial::monomial(basis[i] * basis[j], qq);
            }
        CHECK(via_template == direct);
    }
}

TEST_CASE("encode_psd: min t with Gram [[t,1],[1,t]] gives 1") {
    ConicProgram cp;
    GramTemplate t(basis_1x(1));
    GramBlockHandle h = encode_psd(t, cp);
    LinearRow off;  // q12 = 1
    off.add(h.q_vars[1], 1.0);
    off.rhs = 1.0;
    cp.rows.push_back(off);
    LinearRow eq;  // q11 = q22
    eq.add(h.q_vars[0], 1.0);
    eq.add(h.q_vars[2], -1.0);
    cp.rows.push_back(eq);
    cp.maximize = false;
    cp.set_objective_term(h.q_vars[0], 1.0);
    Solution sol = solve(cp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("1 + 2 lambda x + x^2 is SOS iff |lambda| <= 1") {
    auto probe = [](double lam) {
        Polynomial p = Polynomial::constant(1, Rational(1)) +
                       Rational::parse(std::to_string(lam)) * Rational(2) *
                           Polynomial::variable(1, 0) +
                       Polynomial::variable(1, 0) * Polynomial::variable(1, 0);
        return cone_membership(p, GramCone::Sos).status;
    };
    CHECK(probe(0.9) == SolveStatus::Optimal);
    CHECK(probe(-0.9) == SolveStatus::Optimal);
    CHECK(probe(1.1) == SolveStatus::PrimalInfeasible);
    CHECK(probe(-1.1) == SolveStatus::PrimalInfeasible);
}

TEST_CASE("encode_dd membership matches the DD row condition") {
    // (1-x)^2 has Gram [[1,-1],[-1,1]]: DD-representable
    Polynomial sq = (Polynomial::constant(1, Rational(1)) - Polynomial::variable(1, 0)) *
                    (Polynomial::constant(1, Rational(1)) - Polynomial::variable(1, 0));
    CHECK(cone_membership(sq, GramCone::Dsos).status == SolveStatus::Optimal);
    // 1 + 2*1.5*x + x^2: SOS-infeasible, hence DD-infeasible
    Polynomial bad = Polynomial::constant(1, Rational(1)) +
                     Rational(3) * Polynomial::variable(1, 0) +
                     Polynomial::variable(1, 0) * Polynomial::variable(1, 0);
    CHECK(cone_membership(bad, GramCone::Dsos).status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("sdd encoding certifies SDD-but-not-DD matrices") {
    // x^2 + 4xy + 4y^2 = (x+2y)^2 has rank-1 Gram [[1,2],[2,4]]: SDD yes, DD no
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Polynomial p = (x + Rational(2) * y) * (x + Rational(2) * y);
    Eigen::MatrixXd q(2, 2);
    q << 1, 2, 2, 4;
    CHECK_FALSE(check_dd(q));
    CHECK(sdd_split(q));
    CHECK(cone_membership(p, GramCone::Sdsos).status == SolveStatus::Optimal);
    // and the same polynomial is not DSOS over basis (x, y, 1)
    CHECK(cone_membership(p, GramCone::Dsos).status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("check_dd on the worked examples") {
    CHECK(check_dd(Eigen::MatrixXd::Identity(3, 3)));
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_FALSE(check_dd(bad));
    Eigen::MatrixXd good(3, 3);
    good << 3, -1, -1, -1, 3, -1, -1, -1, 3;
    CHECK(check_dd(good));
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 2, 3, 1;
    CHECK_THROWS_AS(check_dd(asym), std::invalid_argument);
}

TEST_CASE("Lorentz triple arithmetic of the 2x2 blocks") {
    // A = I: (2, 0, 0) in L3 ; A = [[2,1],[1,2]]: (4, 2, 0)
    auto in_l3 = [](double t, double u, double v) { return t >= std::sqrt(u * u + v * v); };
    CHECK(in_l3(2, 0, 0));
    CHECK(in_l3(4, 2, 0));
    CHECK_FALSE(in_l3(1, 2, 0));
}

TEST_CASE("cone inclusion probe finds no violations") {
    for (int size : {3, 4, 6}) {
        InclusionProbeReport rep = cone_inclusion_probe(size, 40, 7 + size);
        CHECK(rep.dd_samples == 40);
        CHECK(rep.sdd_samples == 40);
        std::string first = rep.violations.empty() ? std::string("ok") : rep.violations[0];
        INFO(first);
        CHECK(rep.pass());
    }
}

TEST_CASE("encoding soundness on solver output") {
    // minimize trace of a DD Gram representing x^2 + y^2 + xy:
    // reconstructed Q must satisfy the row condition within tolerance
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Polynomial p = x * x + y * y + x * y;
    for (GramCone cone : {GramCone::Dsos, GramCone::Sdsos, GramCone::Sos}) {
        ConicProgram cp;
        GramTemplate templ(basis_1x(2));
        GramBlockHandle h = encode_gram(templ, cone, cp);
        for (const auto& [mono, entries] : templ.expansion()) {
            LinearRow row;
            std::map<std::int32_t, double> acc;
            for (const auto& e : entries)
                acc[h.q_vars[templ.tri_index(e.row, e.col)]] += e.multiplicity;
            for (auto& [v, c] : acc) row.add(v, c);
            row.rhs = p.coefficient(mono).to_double();
            cp.rows.push_back(std::move(row));
        }
        cp.maximize = false;
        Solution sol = solve(cp);
        REQUIRE(sol.status == SolveStatus::Optimal);
        Eigen::MatrixXd q(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double v = sol.x[h.q_vars[ConicProgram::tri_index(3, i, j)]];
                q(i, j) = v;
                q(j, i) = v;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-8 * std::max(1.0, q.norm()));
        if (cone == GramCone::Dsos) CHECK(check_dd(q, 1e-7));
    }
}
