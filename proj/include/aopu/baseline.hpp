#pragma once

#include "aopu/augment.hpp"
#include "aopu/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace aopu {

struct AdamConfig {
    double lr = 0.005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Same feature map and readout as AopuModel, trained on plain MSE gradients
// with Adam.
struct RvflnnModel {
    Matrix w_tilde;  // (d+h) × o
    Matrix m;        // first-moment accumulator
    Matrix v;        // second-moment accumulator
    std::uint64_t t = 0;
    AdamConfig adam;
    std::shared_ptr<const Augmenter> augmenter;

    RvflnnModel() = default;
    RvflnnModel(std::size_t feature_dim, std::size_t outputs, AdamConfig adam = {},
                std::shared_ptr<const Augmenter> augmenter = nullptr);

    std::size_t feature_dim() const noexcept { return w_tilde.rows(); }
};

Matrix forward(const RvflnnModel& model, const Matrix& x_tilde);

// ∇_W̃ MSE = −(2/b)·x̃·(y − x̃ᵀW̃)
Matrix mse_gradient(const Matrix& x_tilde, const Matrix& y, const Matrix& w_tilde);

// Bias-corrected Adam. Non-finite gradient or update throws DivergenceError
// and leaves the model untouched.
void adam_step(RvflnnModel& model, const Matrix& grad);

struct RvflnnStepReport {
    double loss = 0.0;  // MSE before the update
    double grad_norm = 0.0;
};

RvflnnStepReport rvflnn_step(RvflnnModel& model, const Matrix& x_tilde, const Matrix& y);

// Linear minimum-variance estimator ŷ = W·x + b with W = R_yx·pinv(R_xx) and
// b = E[y] − W·E[x], covariances normalized by 1/n.
struct LinearMve {
    Matrix w;       // o × d
    Matrix offset;  // o × 1

    // X is d×n, returns o×n.
    Matrix predict(const Matrix& x) const;
};

// X is d×n (columns are samples), Y is o×n. Throws InvalidInput if n < 2.
LinearMve linear_mve_fit(const Matrix& x, const Matrix& y);

// Joint pmf over a finite grid: prob(i, j) = P(x = xs[i], y = ys[j]).
struct DiscretePmf {
    std::vector<double> xs;
    std::vector<double> ys;
    Matrix prob;
};

// Throws InvalidInput on a malformed pmf.
void validate_pmf(const DiscretePmf& pmf);

// E[y | x = x_query]. Throws UndefinedConditional if x_query is outside the
// support or has zero marginal mass.
double conditional_mean_mve(const DiscretePmf& pmf, double x_query);

}  // namespace aopu
