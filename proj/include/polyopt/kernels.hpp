#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace polyopt::kernels {

/// Function table for the dense inner loops of the interior-point solver.
/// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
/// variant is selected at runtime when the CPU supports it. Both variants
/// are equivalence-tested against each other.
struct Ops {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scale)(double alpha, double* x, std::size_t n);
    /// y += alpha * row, with row gathered from values at indices (sparse axpy).
    void (*scatter_axpy)(double alpha, const std::int32_t* idx, const double* val,
                         std::size_t nnz, double* y);
    /// Rank-1 symmetric update on the packed-upper row i of a dense matrix:
    ///   m[i*dim + j] += alpha * v[j] for j in [i, dim)  (row-major tail).
    void (*row_update)(double alpha, const double* v, double* row, std::size_t n);
};

/// Active implementation (runtime-selected once).
const Ops& ops();

/// Reference scalar table (for equivalence tests).
const Ops& scalar_ops();

/// AVX2 table or nullptr when unsupported on this CPU.
const Ops* avx2_ops_if_supported();

}  // namespace polyopt::kernels
