#pragma once

// Dense arithmetic kernels with a scalar reference implementation and an
// AVX2+FMA variant. The variant is picked once at startup from CPUID; tests
// can pin either one through set_isa().
//
// Layout is row-major throughout. `ld*` arguments are row strides in
// elements. All gemm kernels overwrite C.
//
// Accumulation order per output element is fixed: axpy-form kernels (NN, TN)
// add k = 0, 1, ... in sequence with a fused multiply-add in both variants,
// so they agree bit-for-bit. Dot-form kernels (NT, gemv) reassociate inside
// the SIMD lanes and agree to round-off only.

#include <cstddef>
#include <string_view>

namespace aopu::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

// Best ISA the running CPU supports (and the build enabled).
Isa detected_isa() noexcept;

// ISA currently used by the dispatching entry points below.
Isa active_isa() noexcept;

// Throws InvalidInput if the CPU cannot run `isa`.
void set_isa(Isa isa);

double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);

// C[m×n] = A[m×k] · B[k×n]
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
// C[m×n] = A[k×m]ᵀ · B[k×n]
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
// C[m×n] = A[m×k] · B[n×k]ᵀ
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);

// Per-ISA entry points, bypassing dispatch. Used by the equivalence tests.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
}  // namespace scalar

namespace avx2 {
bool available() noexcept;
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);
}  // namespace avx2

}  // namespace aopu::kernels
