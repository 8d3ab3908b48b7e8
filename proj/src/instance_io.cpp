#include "polyopt/instance_io.hpp"

#include <cctype>
#include <sstream>

namespace polyopt {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column)),
      line(line),
      column(column) {}

namespace {

struct Cursor {
    const std::string& s;
    int line;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    int column() const { return static_cast<int>(pos) + 1; }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, column()); }
};

std::string read_number(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    while (c.pos < c.s.size() &&
           (std::isdigit(static_cast<unsigned char>(c.s[c.pos])) || c.s[c.pos] == '.' ||
            c.s[c.pos] == '/'))
        ++c.pos;
    if (c.pos == start) c.fail("expected a number");
    return c.s.substr(start, c.pos - start);
}

int read_int(Cursor& c) {
    std::string t = read_number(c);
    try {
        return std::stoi(t);
    } catch (const std::exception&) {
        c.fail("expected an integer, got '" + t + "'");
    }
}

/// term := [number ['*']] (x<i> ['^' e])* ; at least a number or a variable.
void parse_term(Cursor& c, std::size_t n, int sign, Polynomial& out) {
    Rational coeff(sign);
    bool have_any = false;
    char ch = c.peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
        int col = c.column();
        std::string num = read_number(c);
        try {
            coeff *= Rational::parse(num);
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad coefficient: ") + e.what(), c.line, col);
        }
        have_any = true;
        if (c.peek() == '*') ++c.pos;
    }
    Monomial m(n);
    std::vector<int> exp(n, 0);
    while (c.peek() == 'x') {
        ++c.pos;
        int col = c.column();
        int idx = read_int(c);
        if (idx < 1 || static_cast<std::size_t>(idx) > n)
            throw ParseError("variable x" + std::to_string(idx) + " out of range (vars " +
                                 std::to_string(n) + ")",
                             c.line, col);
        int e = 1;
        if (c.peek() == '^') {
            ++c.pos;
            e = read_int(c);
            if (e < 0) c.fail("negative exponent");
        }
        exp[idx - 1] += e;
        have_any = true;
        if (c.peek() == '*') ++c.pos;  // tolerate c * x1 * x2
    }
    if (!have_any) c.fail("expected a term");
    out.add_term(Monomial(std::move(exp)), coeff);
}

Polynomial parse_poly(Cursor& c, std::size_t n) {
    Polynomial p(n);
    int sign = 1;
    if (c.peek() == '+' || c.peek() == '-') {
        sign = c.peek() == '-' ? -1 : 1;
        ++c.pos;
    }
    parse_term(c, n, sign, p);
    while (true) {
        char ch = c.peek();
        if (ch == '+' || ch == '-') {
            ++c.pos;
            parse_term(c, n, ch == '-' ? -1 : 1, p);
        } else {
            break;
        }
    }
    return p;
}

}  // namespace

PopInstance parse_instance(const std::string& text, const std::string& name) {
    PopInstance inst;
    inst.name = name;
    bool have_vars = false, have_obj = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::vector<std::pair<int, std::string>> deferred;  // polynomial lines, parsed after vars
    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = raw;
        if (auto h = s.find('#'); h != std::string::npos) s.resize(h);
        Cursor c{s, lineno};
        if (c.done()) continue;
        std::size_t kw_start = c.pos;
        while (c.pos < s.size() && std::isalpha(static_cast<unsigned char>(s[c.pos]))) ++c.pos;
        std::string kw = s.substr(kw_start, c.pos - kw_start);
        if (kw == "vars") {
            inst.n = static_cast<std::size_t>(read_int(c));
            if (inst.n == 0) c.fail("vars must be positive");
            inst.nonneg.assign(inst.n, false);
            inst.objective = Polynomial(inst.n);
            have_vars = true;
        } else if (kw == "nonneg") {
            if (!have_vars) c.fail("nonneg before vars");
            c.skip_ws();
            if (s.compare(c.pos, 3, "all") == 0) {
                inst.nonneg.assign(inst.n, true);
            } else {
                while (!c.done()) {
                    int col = c.column();
                    int idx = read_int(c);
                    if (idx < 1 || static_cast<std::size_t>(idx) > inst.n)
                        throw ParseError("nonneg index out of range", lineno, col);
                    inst.nonneg[idx - 1] = true;
                    if (c.peek() == ',') ++c.pos;
                }
            }
        } else if (kw == "min" || kw == "st" || kw == "opt") {
            if (!have_vars) c.fail("declaration before vars");
            deferred.emplace_back(lineno, s);
        } else {
            c.pos = kw_start;
            c.fail("unknown declaration '" + kw + "'");
        }
    }
    if (!have_vars) throw ParseError("missing vars declaration", lineno, 1);
    for (auto& [ln, s] : deferred) {
        Cursor c{s, ln};
        std::size_t kw_start = c.pos;
        while (c.pos < s.size() && std::isalpha(static_cast<unsigned char>(s[c.pos]))) ++c.pos;
        std::string kw = s.substr(kw_start, c.pos - kw_start);
        if (kw == "min") {
            inst.objective = parse_poly(c, inst.n);
            if (!c.done()) c.fail("trailing input after objective");
            if (inst.objective.is_zero()) c.fail("empty objective");
            have_obj = true;
        } else if (kw == "st") {
            Polynomial p = parse_poly(c, inst.n);
            c.skip_ws();
            bool geq;
            if (s.compare(c.pos, 2, ">=") == 0)
                geq = true;
            else if (s.compare(c.pos, 2, "<=") == 0)
                geq = false;
            else
                c.fail("expected >= or <=");
            c.pos += 2;
            Polynomial rhs = parse_poly(c, inst.n);
            // normalize to g(x) >= 0
            inst.constraints.push_back(geq ? p - rhs : rhs - p);
            if (!c.done()) c.fail("trailing input after constraint");
        } else if (kw == "opt") {
            c.skip_ws();
            int sign = 1;
            if (c.peek() == '+' || c.peek() == '-') {
                sign = c.peek() == '-' ? -1 : 1;
                ++c.pos;
            }
            inst.known_optimum = sign * Rational::parse(read_number(c)).to_double();
        }
    }
    if (!have_obj) throw ParseError("missing objective (min line)", lineno, 1);
    return inst;
}

namespace {
std::string poly_text(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rational a = c;
        if (first) {
            if (a < Rational(0)) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < Rational(0) ? " - " : " + ");
            a = a.abs();
        }
        if (m.is_one())
            os << a.str();
        else if (a == Rational(1))
            os << m.str();
        else
            os << a.str() << " * " << m.str();
        first = false;
    }
    return os.str();
}
}  // namespace

std::string serialize_instance(const PopInstance& inst) {
    std::ostringstream os;
    os << "vars " << inst.n << "\n";
    bool all = inst.all_nonneg();
    bool any = false;
    for (bool b : inst.nonneg) any |= b;
    if (all && inst.n > 0) {
        os << "nonneg all\n";
    } else if (any) {
        os << "nonneg ";
        bool first = true;
        for (std::size_t i = 0; i < inst.n; ++i)
            if (inst.nonneg[i]) {
                if (!first) os << ",";
                os << i + 1;
                first = false;
            }
        os << "\n";
    }
    os << "min " << poly_text(inst.objective) << "\n";
    for (const auto& g : inst.constraints) os << "st " << poly_text(g) << " >= 0\n";
    if (inst.known_optimum) {
        std::ostringstream v;
        v.precision(17);
        v << *inst.known_optimum;
        os << "opt " << v.str() << "\n";
    }
    return os.str();
}

namespace {

Polynomial var(std::size_t n, int i) { return Polynomial::variable(n, i - 1); }
Polynomial cst(std::size_t n, std::int64_t c) { return Polynomial::constant(n, Rational(c)); }
Polynomial sq(const Polynomial& p) { return p * p; }

PopInstance make_qpop5() {
    const std::size_t n = 5;
    PopInstance inst;
    inst.name = "qpop5";
    inst.n = n;
    auto x = [&](int i) { return var(n, i); };
    inst.objective = 2 * x(1) - x(2) + x(3) - 2 * x(4) - x(5);
    inst.constraints = {
        sq(x(1) - cst(n, 2)) - sq(x(2)) - sq(x(3) - cst(n, 1)) - sq(x(5) - cst(n, 1)),
        x(1) * x(3) - x(4) * x(5) + sq(x(1)) - cst(n, 1),
        x(3) - sq(x(2)) - sq(x(4)) - cst(n, 1),
        x(1) * x(5) - x(2) * x(3) - cst(n, 2),
        cst(n, 14) - x(1) - x(2) - x(3) - x(4) - x(5),
    };
    inst.nonneg.assign(n, true);
    inst.known_optimum = 0.3865;  // attained near (1.029, 0, 1.230, 0.479, 1.943)
    return inst;
}

PopInstance make_qpop10() {
    const std::size_t n = 10;
    PopInstance inst;
    inst.name = "qpop10";
    inst.n = n;
    auto x = [&](int i) { return var(n, i); };
    inst.objective = -x(1) - x(2) + x(3) - 2 * x(4) - x(5) + x(6) + x(7) - x(8) + x(9) - 2 * x(10);
    Polynomial sum(n);
    for (int i = 1; i <= 10; ++i) sum += x(i);
    inst.constraints = {
        sq(x(3) - cst(n, 2)) - sq(x(5) - cst(n, 1)) - 2 * x(6) + sq(x(8)) - sq(x(9) - cst(n, 2)) +
            cst(n, 4),
        -sq(x(2)) + x(3) * x(10) - sq(x(4)) + x(6) * x(7) - cst(n, 1),
        x(1) * x(8) - x(2) * x(3) + x(4) * x(7) - x(5) * x(10) - cst(n, 2),
        cst(n, 5) - sum,
    };
    inst.nonneg.assign(n, true);
    inst.known_optimum = -5.1779;
    return inst;
}

PopInstance make_qpop15() {
    const std::size_t n = 15;
    PopInstance inst;
    inst.name = "qpop15";
    inst.n = n;
    auto x = [&](int i) { return var(n, i); };
    Polynomial obj(n);
    const int sgn[15] = {1, -1, 1, -1, -1, 1, 1, -1, 1, -1, 1, -1, 1, -1, 1};
    for (int i = 1; i <= 15; ++i) obj += sgn[i - 1] * x(i);
    inst.objective = obj;
    Polynomial sum(n);
    for (int i = 1; i <= 15; ++i) sum += x(i);
    inst.constraints = {
        sq(x(1) - cst(n, 2)) - sq(x(2)) + sq(x(3) - cst(n, 2)) - sq(x(4) - cst(n, 1)) -
            sq(x(5) - cst(n, 1)) + sq(x(6) - cst(n, 2)) - sq(x(7) - cst(n, 1)) - sq(x(8)) -
            sq(x(9) - cst(n, 2)) - sq(x(10) - cst(n, 1)) + sq(x(11)) - sq(x(12)) +
            sq(x(13) - cst(n, 2)) + sq(x(14)) - sq(x(15) - cst(n, 1)),
        -x(1) * x(7) - x(4) * x(5) - sq(x(3)) + x(6) * x(9) + x(10) * x(12) - cst(n, 1),
        x(2) * x(3) - x(8) * x(11) - sq(x(14)) + x(5) * x(15) - cst(n, 2),
        cst(n, 10) - sum,
    };
    inst.nonneg.assign(n, true);
    inst.known_optimum = -8.6713;  // best known feasible value
    return inst;
}

}  // namespace

PopInstance embedded_instance(int which) {
    switch (which) {
        case 1:
            return make_qpop5();
        case 2:
            return make_qpop10();
        case 3:
            return make_qpop15();
        default:
            throw std::invalid_argument("no embedded instance " + std::to_string(which));
    }
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

PopInstance gen_ball(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_ball needs n >= 1");
    PopInstance inst;
    inst.name = "ball-n" + std::to_string(n) + "-s" + std::to_string(seed);
    inst.n = n;
    // Stream: splitmix64 state seeded with seed xor golden-ratio mix of n;
    // one draw per monomial of degree <= 2 in graded-lex order; the top 26
    // bits of each draw give an exact dyadic coefficient k/2^25 in [-1, 1).
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(n) + 1));
    Polynomial obj(n);
    for (const auto& m : monomials_up_to(n, 2)) {
        std::int64_t k = static_cast<std::int64_t>(splitmix64(state) >> 38) - (1LL << 25);
        obj.add_term(m, Rational(k, 1LL << 25));
    }
    inst.objective = obj;
    Polynomial norm2(n);
    for (std::size_t i = 0; i < n; ++i) norm2 += sq(Polynomial::variable(n, i));
    inst.constraints = {
        Polynomial::constant(n, Rational(1)) - norm2,
        norm2 - Polynomial::constant(n, Rational(9, 25)),
    };
    inst.nonneg.assign(n, true);
    return inst;
}

}  // namespace polyopt
