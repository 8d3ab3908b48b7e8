#pragma once

#include <stdexcept>
#include <string>

#include "polyopt/conic_program.hpp"

namespace polyopt {

struct UnsupportedCone : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class ConicFormat { SdpaSparse, Cbf };

/// Serializes a conic program. Both formats are byte-deterministic for a
/// fixed program.
///
/// SDPA sparse (.dat-s) carries LP + PSD data only and encodes the program
/// on the dual side (F_i from the rows, F_0 from the objective), so reading
/// the file back through import_program reproduces the original optimum;
/// external SDPA-convention solvers report the negated value. Free variables
/// are split into differences of nonnegatives; Lorentz cones are rejected
/// with UnsupportedCone.
///
/// CBF (version 1) represents free/nonnegative/Lorentz scalar variables,
/// PSD variable blocks and the equality rows directly.
std::string export_program(const ConicProgram& cp, ConicFormat format);

/// Parses what export_program wrote (plus ordinary files following the same
/// conventions). Throws std::runtime_error on malformed input.
ConicProgram import_program(const std::string& text, ConicFormat format);

}  // namespace polyopt
