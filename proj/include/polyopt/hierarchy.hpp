#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyopt/conic_program.hpp"
#include "polyopt/encodings.hpp"
#include "polyopt/index_set.hpp"
#include "polyopt/pop.hpp"

namespace polyopt {

struct LevelTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EmptyIndexSet : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Family { QM, PO };

std::string family_name(Family f);

/// Which relaxation to build: the quadratic-module family (growing-degree
/// multipliers s_i on each constraint) or the multiplier-product family
/// (one small multiplier per product x^alpha g^beta). GramCone::Scalar is
/// only meaningful for the PO family (nonnegative scalar multipliers).
struct HierarchySpec {
    Family family = Family::PO;
    GramCone cone = GramCone::Sos;
    int r = 0;
};

std::string hierarchy_name(const HierarchySpec& spec);

/// 1 + sum_i x_i + sum_j g_j(x)
Polynomial multiplier_base(const PopInstance& inst);

/// One multiplier of the matched identity and where its Gram block lives.
struct MultiplierBlock {
    Polynomial carrier;           // x^alpha g^beta (PO) or g_i (QM; 1 for s_0)
    std::vector<Monomial> basis;  // Gram basis of the multiplier
    GramBlockHandle handle;
    CarrierIndex index;         // PO only
    int constraint_index = -1;  // QM only; -1 for s_0
};

/// Everything needed to turn a solver point back into multiplier polynomials.
struct DecoderMap {
    HierarchySpec spec;
    std::int32_t lambda_var = -1;
    Polynomial lhs_base;  // (1 + sum x + sum g)^r for PO, 1 for QM
    std::vector<MultiplierBlock> blocks;
};

struct BuildResult {
    ConicProgram program;
    DecoderMap decoder;
};

///

/// Reported comparison degree of a hierarchy level: 2r for the QM family;
/// r * max_i deg(g_i) + d (d the instance degree) for the PO family.
int dhat(const PopInstance& inst, const HierarchySpec& spec);

/// Smallest level whose dhat equals the requested degree; throws
/// std::invalid_argument when no level lines up.
int level_for_dhat(const PopInstance& inst, Family family, int dhat_target);

/// Builds the conic program whose optimum is the level-r bound.
/// QM: f - lambda = s_0 + sum_i s_i g_i with deg(s_0) <= 2r and
///     deg(s_i) <= 2 floor(r - deg(g_i)/2); nonnegative variables are
///     materialized as explicit constraints x_i >= 0.
/// PO: (1 + sum x + sum g)^r (f - lambda) = sum_(alpha,beta) p x^alpha g^beta
///     over all carriers with deg(x^alpha g^beta) <= r max_i deg(g_i) + d;
///     carriers of degree <= budget - 2 get a degree-2 multiplier over the
///     basis (1, x_1..x_n) in the requested cone, the top two layers get
///     nonnegative scalars (an SOS_2 of degree 0).
BuildResult build_hierarchy(const PopInstance& inst, const HierarchySpec& spec);

}  // namespace polyopt
