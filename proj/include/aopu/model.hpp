#pragma once

#include "aopu/augment.hpp"
#include "aopu/linalg.hpp"
#include "aopu/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>

namespace aopu {

// Trackable parameter W̃ and its constant learning rate. The augmenter handle
// is optional: the math below only ever sees x̃.
struct AopuModel {
    Matrix w_tilde;  // (d+h) × o
    double lr = 1.0;
    std::shared_ptr<const Augmenter> augmenter;

    AopuModel() = default;
    // W̃ starts at zero.
    AopuModel(std::size_t feature_dim, std::size_t outputs, double lr,
              std::shared_ptr<const Augmenter> augmenter = nullptr);

    std::size_t feature_dim() const noexcept { return w_tilde.rows(); }
    std::size_t outputs() const noexcept { return w_tilde.cols(); }
};

// D = x̃x̃ᵀW̃ for the batch identified by `batch_hash`.
struct DualState {
    Matrix d;
    std::uint64_t batch_hash = 0;
};

struct StepReport {
    double loss = 0.0;  // before the update
    double rr = 0.0;
    std::size_t rank = 0;
    double grad_norm = 0.0;
};

// ŷ = x̃ᵀW̃ (b × o).
Matrix forward(const AopuModel& model, const Matrix& x_tilde);

// D = x̃·(x̃ᵀW̃), never forming the (d+h)² Gram matrix.
DualState dual(const AopuModel& model, const Matrix& x_tilde);

// pinv(x̃ᵀx̃)·x̃ᵀD. Equals forward() when x̃ has full column rank.
Matrix reconstruct(const Matrix& x_tilde, const Matrix& d);
Matrix reconstruct(const linalg::GramInverse& gram, const Matrix& x_tilde, const Matrix& d);

// (1/b)·Σ (y − recon)²
double loss(const Matrix& y, const Matrix& recon);

// ∇_D L = −(2/b)·x̃·pinv(x̃ᵀx̃)·(y − reconstruct(x̃, D)). Backpropagation
// stops at D: this is the only gradient the unit computes.
Matrix truncated_gradient(const Matrix& x_tilde, const Matrix& y, const Matrix& d);
Matrix truncated_gradient(const linalg::GramInverse& gram, const Matrix& x_tilde, const Matrix& y,
                          const Matrix& d);

// pinv(x̃x̃ᵀ)·∇_W̃ MSE: the natural gradient under a unit-covariance Gaussian
// output, whose Fisher matrix is x̃x̃ᵀ. Reference oracle only; it forms the
// (d+h)² matrix explicitly.
Matrix natural_gradient_reference(const Matrix& x_tilde, const Matrix& y, const Matrix& w_tilde);

// W̃ ← W̃ − α·∇_D L. On a non-finite loss or gradient the model is left
// untouched and DivergenceError carries the batch RR.
StepReport step(AopuModel& model, const AugmentedBatch& batch);
// Same update from a raw block; rank and RR come out of the step's own
// factorization instead of a separate decomposition.
StepReport step(AopuModel& model, const Matrix& x_tilde, const Matrix& y);

}  // namespace aopu
