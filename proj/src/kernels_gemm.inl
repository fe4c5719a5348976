// Blocked gemm loops shared by the scalar and AVX2 translation units. Each
// includer defines `dot` and `axpy` in the enclosing namespace first; the
// loops below only decide traversal order, never accumulation order.

namespace {

constexpr std::size_t kRowBlock = 64;
constexpr std::size_t kColBlock = 512;

inline void zero_block(std::size_t m, std::size_t n, double* c, std::size_t ldc) {
    for (std::size_t i = 0; i < m; ++i) {
        double* row = c + i * ldc;
        for (std::size_t j = 0; j < n; ++j) row[j] = 0.0;
    }
}

}  // namespace

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
    if (n == 1 && ldb == 1) {
        for (std::size_t i = 0; i < m; ++i) c[i * ldc] = dot(a + i * lda, b, k);
        return;
    }
    zero_block(m, n, c, ldc);
    for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock) {
        const std::size_t i1 = std::min(m, i0 + kRowBlock);
        for (std::size_t j0 = 0; j0 < n; j0 += kColBlock) {
            const std::size_t nj = std::min(n, j0 + kColBlock) - j0;
            for (std::size_t p = 0; p < k; ++p) {
                const double* brow = b + p * ldb + j0;
                for (std::size_t i = i0; i < i1; ++i) {
                    axpy(a[i * lda + p], brow, c + i * ldc + j0, nj);
                }
            }
        }
    }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
    if (n == 1 && ldb == 1 && ldc == 1) {
        // C is a contiguous vector: sweep rows of A instead of columns.
        for (std::size_t i = 0; i < m; ++i) c[i] = 0.0;
        for (std::size_t p = 0; p < k; ++p) axpy(b[p], a + p * lda, c, m);
        return;
    }
    zero_block(m, n, c, ldc);
    for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock) {
        const std::size_t i1 = std::min(m, i0 + kRowBlock);
        for (std::size_t j0 = 0; j0 < n; j0 += kColBlock) {
            const std::size_t nj = std::min(n, j0 + kColBlock) - j0;
            for (std::size_t p = 0; p < k; ++p) {
                const double* arow = a + p * lda;
                const double* brow = b + p * ldb + j0;
                for (std::size_t i = i0; i < i1; ++i) {
                    axpy(arow[i], brow, c + i * ldc + j0, nj);
                }
            }
        }
    }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) c[i * ldc + j] = dot(a + i * lda, b + j * ldb, k);
    }
}
