#pragma once

#include "aopu/baseline.hpp"
#include "aopu/matrix.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace aopu::verify {

// Machine-readable outcome of one numerical check.
struct CheckReport {
    std::string name;
    bool passed = false;
    double measured_error = 0.0;
    double tolerance = 0.0;
    nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const CheckReport& report);

// Central differences, one coordinate at a time.
Matrix finite_diff_gradient(const std::function<double(const Matrix&)>& f, const Matrix& point, double eps = 1e-6);

// ŷ ~ N(x̃ᵀW̃, I): natural parameter W̃, expectation parameter m = x̃x̃ᵀW̃.
struct GaussianOutputSpec {
    Matrix x_tilde;  // p × b
    Matrix w_tilde;  // p × o
};

struct FimOptions {
    std::size_t n_samples = 100000;
    double tolerance = 0.05;
    std::size_t replicates = 8;  // for the doubling check
    std::uint64_t seed = 1;
};

// Monte-Carlo FIM E[vec(s)vec(s)ᵀ] with score s = x̃(ŷ − x̃ᵀW̃) against the
// Jacobian of m(W̃), which is I_o ⊗ x̃x̃ᵀ. Also asserts the RMS error over
// replicates shrinks when the sample count doubles.
CheckReport check_fim_equals_grad_m(const GaussianOutputSpec& spec, const FimOptions& options = {});

// Requires x̃x̃ᵀ invertible (PreconditionError otherwise). Stationarity of
// ⟨W̃, D⟩ − ½ tr(Dᵀ pinv(x̃x̃ᵀ) D) at D* = x̃x̃ᵀW̃ plus a perturbation sweep.
CheckReport check_mirror_map(const Matrix& x_tilde, const Matrix& w_tilde, std::size_t perturbations = 100,
                             std::uint64_t seed = 2);

// y = pinv(x̃ᵀx̃)x̃ᵀD* + ε with ε ~ N(0, noise²).
struct CoherenceInstance {
    Matrix x_tilde;  // p × b
    Matrix d_star;   // p × o
    double noise = 0.0;
};

struct CoherenceOptions {
    std::size_t n_samples = 1000;
    std::size_t noise_samples = 10000;
    std::uint64_t seed = 3;
};

// ⟨∇L̂(D), D − D*⟩ ≥ −1e-10 over random D (ε = 0), zero exactly when the
// reconstructions agree, a null-space direction leaving the loss unchanged,
// and, when noise > 0, the noisy average inside a 3σ band of the noise-free
// value.
CheckReport check_coherence(const CoherenceInstance& inst, const CoherenceOptions& options = {});

struct MveOptions {
    std::size_t n_pmfs = 20;
    double grid_step = 0.01;
    std::size_t perturbations = 100;
    std::size_t linear_samples = 500;
    std::uint64_t seed = 4;
};

// Grid search over tabulated estimators for one pmf; returns the worst margin
// (conditional-mean conditional MSE minus the best grid competitor's).
double mve_grid_margin(const DiscretePmf& pmf, double grid_step);

// Conditional mean vs exhaustive 0.01 grid on random pmfs, a two-state
// pmf and a deterministic pmf; the cross-term identity; the linear estimator
// against normal equations and a perturbation sweep.
CheckReport check_mve_optimality(const MveOptions& options = {});

// Truncated gradient vs the pinv(x̃x̃ᵀ)-preconditioned plain gradient on
// full-rank instances, and the commutation identity on arbitrary rank.
CheckReport check_natural_gradient(std::size_t instances = 200, std::uint64_t seed = 5);

// Every check on its default instance.
std::vector<CheckReport> run_all(std::uint64_t seed = 0);

}  // namespace aopu::verify
