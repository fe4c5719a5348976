#pragma once

#include "aopu/matrix.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace aopu::linalg {

// Thin SVD: A[m×n] = U[m×k] · diag(S) · V[n×k]ᵀ with k = min(m, n),
// S non-negative and descending.
struct SvdResult {
    Matrix u;
    std::vector<double> s;
    Matrix v;
};

// Relative singular-value cutoff used when none is given:
// max(rows, cols) · machine epsilon, applied against σ_max.
double default_tolerance(std::size_t rows, std::size_t cols) noexcept;

// Throws NumericalFailure if the decomposition does not converge and
// InvalidInput on non-finite input.
SvdResult svd(const Matrix& a);
std::vector<double> singular_values(const Matrix& a);

// Number of singular values strictly above tol · σ_max. The zero matrix has
// rank 0. `tol` defaults to default_tolerance(rows, cols).
std::size_t rank_from_singular_values(const std::vector<double>& s, double tol);
std::size_t rank(const Matrix& a, std::optional<double> tol = std::nullopt);

// Moore-Penrose pseudo-inverse via reciprocals of the retained singular
// values. The zero matrix maps to the zero matrix of transposed shape.
Matrix pinv(const Matrix& a, std::optional<double> tol = std::nullopt);

// pinv of a Gram-type matrix: symmetrized before decomposition.
Matrix pinv_symmetric(const Matrix& a, std::optional<double> tol = std::nullopt);

// rank(x̃) / batch. Throws InvalidInput if batch == 0 or x̃ does not have
// `batch` columns.
double rank_ratio(const Matrix& x_tilde, std::size_t batch);

// Factorization of a sample matrix X[p×b] (columns are samples) that applies
// pinv(XᵀX) without forming the Gram matrix: with X = U·Σ·Vᵀ,
// pinv(XᵀX) = V·Σ⁻²·Vᵀ over the singular values kept by the rank cutoff.
// Rank and the applied inverse therefore always agree.
class GramInverse {
public:
    explicit GramInverse(const Matrix& x, std::optional<double> tol = std::nullopt);

    std::size_t rank() const noexcept { return rank_; }
    std::size_t batch() const noexcept { return batch_; }
    double rank_ratio() const noexcept;
    const std::vector<double>& singular_values() const noexcept { return s_; }

    // pinv(XᵀX) · m for m with `batch` rows.
    Matrix apply(const Matrix& m) const;
    // pinv(XᵀX) materialized (b×b). For tests and diagnostics.
    Matrix matrix() const;

private:
    std::size_t batch_ = 0;
    std::size_t rank_ = 0;
    std::vector<double> s_;
    Matrix v_kept_;  // b × rank
    std::vector<double> inv_sq_;
};

}  // namespace aopu::linalg
