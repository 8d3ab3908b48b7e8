#pragma once

// Internal machinery of the homogeneous self-dual interior-point solver:
// presolve (free-variable pivoting) and the compiled standard form with
// Nesterov-Todd scalings. Not part of the public API.

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "polyopt/conic_program.hpp"
#include "polyopt/solver.hpp"

namespace polyopt::detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SparseCol {
    std::vector<std::int32_t> row;
    std::vector<double> val;
};

enum class VarClass : std::uint8_t { Free, Nonneg, Soc, Psd };

/// Compiled standard form: min c'x s.t. Ax = b, x in
/// [free | nonneg | soc blocks | psd blocks (svec)] after presolve.
struct StdForm {
    std::int32_t n = 0;  // internal variables
    std::int32_t p = 0;  // internal rows
    std::vector<SparseCol> cols;
    VectorXd b;
    VectorXd c;
    double obj_offset = 0.0;  // constant collected by eliminations (minimization sense)

    std::int32_t num_free = 0;
    std::int32_t num_nonneg = 0;
    std::vector<std::int32_t> soc_dims;
    std::vector<std::int32_t> psd_dims;
    std::int32_t nonneg_begin = 0;
    std::vector<std::int32_t> soc_begin;
    std::vector<std::int32_t> psd_begin;
    std::int32_t cone_dim = 0;    // n - num_free
    double barrier_degree = 0.0;  // nu

    // mapping: internal row -> original row id
    std::vector<std::int32_t> row_origin;
    // internal var -> (original var, scale): x_orig = scale * x_int
    std::vector<std::int32_t> var_origin;
    std::vector<double> var_scale;
    // Ruiz equilibration factors: y_orig = row_scale * y_int
    std::vector<double> row_scale;
};

/// One recorded pivot: variable `var` eliminated using working row `row`.
struct Elimination {
    std::int32_t var = 0;
    std::int32_t row = 0;
    double pivot = 0.0;
    double rhs = 0.0;
    double cvar = 0.0;                                      // working objective coeff of var
    std::vector<std::pair<std::int32_t, double>> row_terms;  // other vars of the pivot row
    std::vector<std::pair<std::int32_t, double>> col_terms;  // other rows containing var
};

struct PresolveResult {
    StdForm form;
    std::vector<Elimination> eliminations;  // applied in order; undone in reverse
    std::vector<std::int32_t> fixed_zero_vars;
    bool trivially_infeasible = false;
    bool trivially_unbounded = false;
    bool minimize_negated = false;  // original program was a maximization
};

PresolveResult presolve(const ConicProgram& cp);

/// Recover the original-space point from an internal one. z recovery uses
/// the raw pairing convention described in solver.hpp. `homogeneous` maps
/// rays (infeasibility certificates): back-substitution then uses rhs = 0
/// and objective = 0.
void recover_primal(const ConicProgram& cp, const PresolveResult& pr, const VectorXd& x_int,
                    std::vector<double>& x_orig, bool homogeneous = false);
void recover_duals(const ConicProgram& cp, const PresolveResult& pr, const VectorXd& y_int,
                   const VectorXd& z_int, std::vector<double>& y_orig,
                   std::vector<double>& z_orig, bool homogeneous = false);

/// Nesterov-Todd scaling state for the full cone (free block excluded).
class NTScaling {
  public:
    explicit NTScaling(const StdForm& sf) : sf_(&sf) {}

    /// Computes the scaling at (x, z); returns false if either point left the
    /// cone interior (numerical breakdown).
    bool update(const VectorXd& x, const VectorXd& z);

    // lambda = scale_x(x) = scale_z(z)
    const VectorXd& lambda() const { return lambda_; }

    VectorXd scale_x(const VectorXd& u) const;    // W^{-1} u
    VectorXd scale_z(const VectorXd& u) const;    // W u
    VectorXd unscale_x(const VectorXd& u) const;  // W u~
    VectorXd unscale_z(const VectorXd& u) const;  // W^{-1} u~
    VectorXd apply_G(const VectorXd& u) const;    // W^2 u
    VectorXd apply_Ginv(const VectorXd& u) const;

    /// Jordan-algebra ops in the scaled space.
    VectorXd jordan_product(const VectorXd& u, const VectorXd& v) const;
    VectorXd jordan_solve_lambda(const VectorXd& r) const;  // (lambda o)^{-1} r
    static double soc_residual(const double* v, std::int32_t dim);

    /// Largest step alpha with v + alpha dv staying in the cone (v interior).
    double max_step(const VectorXd& v, const VectorXd& dv) const;

    /// Cone identity element.
    VectorXd identity() const;

    /// Schur complement M = sum_blocks A_blk W^2 A_blk' over cone columns.
    void accumulate_schur(const std::vector<SparseCol>& cols, MatrixXd& m) const;

    const MatrixXd& psd_T(std::size_t blk) const { return psd_T_[blk]; }

  private:
    const StdForm* sf_;
    VectorXd lambda_;
    VectorXd nonneg_w_;  // w_i = sqrt(x_i / z_i)
    struct SocScaling {
        double eta = 0.0;
        VectorXd wbar;
    };
    std::vector<SocScaling> soc_;
    struct PsdScaling {
        MatrixXd R;
        MatrixXd Rinv;
        MatrixXd T;     // R R'
        MatrixXd Tinv;  // R^{-T} R^{-1}
        VectorXd sigma;
    };
    std::vector<PsdScaling> psd_;
    std::vector<MatrixXd> psd_T_;
};

// svec helpers: packed upper triangle, off-diagonals scaled by sqrt(2)
void svec_to_mat(const double* s, std::int32_t k, MatrixXd& out);
void mat_to_svec(const MatrixXd& m, double* s);

}  // namespace polyopt::detail
