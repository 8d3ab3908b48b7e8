#include "polyopt/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define POLYOPT_X86 1
#endif

namespace polyopt::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void scatter_axpy_scalar(double alpha, const std::int32_t* idx, const double* val,
                         std::size_t nnz, double* y) {
    for (std::size_t k = 0; k < nnz; ++k) y[idx[k]] += alpha * val[k];
}

void row_update_scalar(double alpha, const double* v, double* row, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) row[j] += alpha * v[j];
}

constexpr Ops kScalar{"scalar",       dot_scalar,       axpy_scalar,
                      scale_scalar,   scatter_axpy_scalar, row_update_scalar};

#ifdef POLYOPT_X86

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

__attribute__((target("avx2,fma"))) void axpy_avx2(double alpha, const double* x, double* y,
                                                   std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) void scale_avx2(double alpha, double* x, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

__attribute__((target("avx2,fma"))) void scatter_axpy_avx2(double alpha, const std::int32_t* idx,
                                                           const double* val, std::size_t nnz,
                                                           double* y) {
    // gather/scatter with arbitrary indices does not vectorize profitably;
    // keep the scalar loop but let FMA contract the multiply-add.
    for (std::size_t k = 0; k < nnz; ++k) y[idx[k]] += alpha * val[k];
}

__attribute__((target("avx2,fma"))) void row_update_avx2(double alpha, const double* v,
                                                         double* row, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4)
        _mm256_storeu_pd(row + j,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(v + j), _mm256_loadu_pd(row + j)));
    for (; j < n; ++j) row[j] += alpha * v[j];
}

constexpr Ops kAvx2{"avx2",       dot_avx2,       axpy_avx2,
                    scale_avx2,   scatter_axpy_avx2, row_update_avx2};

bool cpu_has_avx2_fma() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif  // POLYOPT_X86

}  // namespace

const Ops& scalar_ops() { return kScalar; }

const Ops* avx2_ops_if_supported() {
#ifdef POLYOPT_X86
    if (cpu_has_avx2_fma()) return &kAvx2;
#endif
    return nullptr;
}

const Ops& ops() {
    static const Ops& selected = []() -> const Ops& {
        if (const Ops* simd = avx2_ops_if_supported()) return *simd;
        return kScalar;
    }();
    return selected;
}

}  // namespace polyopt::kernels
