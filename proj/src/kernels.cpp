#include "aopu/kernels.hpp"

#include "aopu/error.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace aopu::kernels {

namespace {

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*gemm_nn)(std::size_t, std::size_t, std::size_t, const double*, std::size_t, const double*,
                    std::size_t, double*, std::size_t);
    void (*gemm_tn)(std::size_t, std::size_t, std::size_t, const double*, std::size_t, const double*,
                    std::size_t, double*, std::size_t);
    void (*gemm_nt)(std::size_t, std::size_t, std::size_t, const double*, std::size_t, const double*,
                    std::size_t, double*, std::size_t);
};

constexpr Table kScalar{scalar::dot, scalar::axpy, scalar::gemm_nn, scalar::gemm_tn, scalar::gemm_nt};
constexpr Table kAvx2{avx2::dot, avx2::axpy, avx2::gemm_nn, avx2::gemm_tn, avx2::gemm_nt};

const Table* table_for(Isa isa) { return isa == Isa::Avx2 ? &kAvx2 : &kScalar; }

// AOPU_ISA=scalar forces the reference kernels for a whole process.
Isa initial_isa() {
    if (const char* env = std::getenv("AOPU_ISA"); env != nullptr && std::strcmp(env, "scalar") == 0) {
        return Isa::Scalar;
    }
    return detected_isa();
}

std::atomic<const Table*>& active_table() {
    static std::atomic<const Table*> table{table_for(initial_isa())};
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() noexcept { return avx2::available() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() noexcept {
    return active_table().load(std::memory_order_relaxed) == &kAvx2 ? Isa::Avx2 : Isa::Scalar;
}

void set_isa(Isa isa) {
    if (isa == Isa::Avx2 && !avx2::available()) {
        throw InvalidInput("AVX2/FMA kernels requested but not supported by this CPU");
    }
    active_table().store(table_for(isa), std::memory_order_relaxed);
}

double dot(const double* x, const double* y, std::size_t n) {
    return active_table().load(std::memory_order_relaxed)->dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    active_table().load(std::memory_order_relaxed)->axpy(a, x, y, n);
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
    active_table().load(std::memory_order_relaxed)->gemm_nn(m, n, k, a, lda, b, ldb, c, ldc);
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
    active_table().load(std::memory_order_relaxed)->gemm_tn(m, n, k, a, lda, b, ldb, c, ldc);
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
    active_table().load(std::memory_order_relaxed)->gemm_nt(m, n, k, a, lda, b, ldb, c, ldc);
}

}  // namespace aopu::kernels
