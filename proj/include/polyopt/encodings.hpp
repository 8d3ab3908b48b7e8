#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "polyopt/conic_program.hpp"
#include "polyopt/gram.hpp"

namespace polyopt {

/// Which cone the multiplier's Gram matrix is constrained to live in.
enum class GramCone { Scalar, Dsos, Sdsos, Sos };

std::string gram_cone_name(GramCone c);

/// Where one encoded Gram block lives inside a ConicProgram. q_vars holds the
/// packed upper triangle of Q (row-major, i <= j); the extra vectors describe
/// the auxiliary structure of the DD and SDD encodings so certificates can be
/// checked from the decoded pieces alone.
struct GramBlockHandle {
    GramCone cone = GramCone::Sos;
    std::int32_t size = 0;
    std::vector<std::int32_t> q_vars;
    // DD: per off-diagonal pair (i<j, row-major) the |Q_ij| majorant u_ij.
    std::vector<std::int32_t> dd_abs_vars;
    // SDD: per off-diagonal pair the Lorentz triple
    //   (A_ii + A_jj, 2 A_ij, A_ii - A_jj) of the 2x2 block A^{ij}.
    std::vector<std::array<std::int32_t, 3>> sdd_pair_vars;
};

/// Adds a PSD block of size |basis|; the represented polynomial is SOS iff
/// the block is feasible. A 1x1 block degenerates to a nonnegative scalar.
GramBlockHandle encode_psd(const GramTemplate& t, ConicProgram& cp);

/// Linear (diagonally dominant) restriction: auxiliary u_ij >= +-Q_ij and
/// rows Q_ii >= sum_{j != i} u_ij, all in the nonnegative cone.
GramBlockHandle encode_dd(const GramTemplate& t, ConicProgram& cp);

/// Scaled diagonally dominant restriction: one 2x2 block A^{ij} per pair
/// i < j with Q = sum A^{ij} and each A^{ij} PSD via its Lorentz triple.
GramBlockHandle encode_sdd(const GramTemplate& t, ConicProgram& cp);

GramBlockHandle encode_gram(const GramTemplate& t, GramCone cone, ConicProgram& cp);

/// Exact row test A_ii >= sum_{j != i} |A_ij| (slack >= 0 loosens it for
/// numerically decoded matrices). Throws on non-symmetric input.
bool check_dd(const Eigen::MatrixXd& m, double slack = 0.0);

/// Is m scaled diagonally dominant? Decided constructively: returns the
/// pairwise split A^{ij} when it exists (diagonal slack distributed in
/// proportion to the absolute off-diagonal row mass).
bool sdd_split(const Eigen::MatrixXd& m, std::vector<Eigen::Matrix2d>* blocks = nullptr,
               double tol = 1e-12);

struct InclusionProbeReport {
    int dd_samples = 0;
    int sdd_samples = 0;
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

/// Samples random DD matrices (must be SDD-splittable and PSD) and random
/// SDD-constructed matrices (must be PSD). Deterministic per seed.
InclusionProbeReport cone_inclusion_probe(int size, int samples, std::uint64_t seed);

}  // namespace polyopt
