#pragma once

#include <cstdint>
#include <string>

#include "polyopt/pop.hpp"

namespace polyopt {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int column);
    int line;
    int column;
};

/// Text instance format, one declaration per line:
///   vars n
///   nonneg all|i,j,...
///   min <poly>
///   st <poly> >= <const>     (or <= <const>, normalized to c - p >= 0)
///   opt <value>              (optional known optimum)
/// Polynomial syntax: c * x1^a1 x2^a2 + ... ; bare constants and bare power
/// products are allowed, exponent defaults to 1.
PopInstance parse_instance(const std::string& text, const std::string& name = "instance");

std::string serialize_instance(const PopInstance& inst);

/// Embedded benchmark POPs (5, 10 and 15 variable quadratics).
PopInstance embedded_instance(int which);

/// Random quadratic objective over the unit-ball shell intersected with the
/// nonnegative orthant:
///   min sum_{|a|<=2} c_a x^a  s.t.  1 - |x|^2 >= 0, |x|^2 - 0.36 >= 0, x >= 0
/// Coefficients c_a are exact dyadic rationals k/2^26 drawn uniformly from
/// [-1, 1) by a splitmix64 stream seeded with (seed, n); the stream is
/// documented in gen_ball's implementation and is stable across platforms.
PopInstance gen_ball(std::size_t n, std::uint64_t seed);

/// The splitmix64 step used by gen_ball (exposed for tests).
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace polyopt
