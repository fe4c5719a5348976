#pragma once

#include "aopu/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aopu {

enum class Activation {
    Tanh,
    HardShrink,
    TanhShrink,
    SoftSign,
    SoftShrink,
    Sigmoid,
    Relu,
    Relu6,
    RRelu,
    LeakyRelu,
    HardSwish,
    Mish,
};

inline constexpr double kShrinkLambda = 0.5;
// Midpoint of the (1/8, 1/3) sampling range; fixed so runs are reproducible.
inline constexpr double kRReluSlope = (1.0 / 8.0 + 1.0 / 3.0) / 2.0;
inline constexpr double kLeakyReluSlope = 0.01;

// Lowercase identifiers: tanh, hardshrink, tanhshrink, softsign, softshrink,
// sigmoid, relu, relu6, rrelu, leakyrelu, hardswish, mish.
Activation parse_activation(std::string_view name);
std::string_view activation_name(Activation a) noexcept;
const std::vector<Activation>& all_activations();
// Odd activations whose mean under a symmetric input is zero.
bool is_zero_mean(Activation a) noexcept;

double activate(Activation a, double x) noexcept;
Matrix activation_apply(Activation a, const Matrix& m);
Matrix activation_apply(std::string_view name, const Matrix& m);

// Standardizes every column over the feature axis (population variance, no
// affine). Constant columns are left at zero after centering.
Matrix layer_norm(const Matrix& m);

struct AugmentConfig {
    std::size_t input_dim = 1;
    std::size_t hidden = 2048;
    Activation activation = Activation::Tanh;
    bool layer_norm = false;
    std::uint64_t seed = 0;
};

// Fixed random feature map x ↦ concat[acti(Ĝᵀx), x]. Ĝ is drawn once from
// N(0, 1) in row-major order and never changes.
class Augmenter {
public:
    explicit Augmenter(const AugmentConfig& config);

    const AugmentConfig& config() const noexcept { return config_; }
    const Matrix& g_hat() const noexcept { return g_hat_; }
    std::size_t output_dim() const noexcept { return config_.input_dim + config_.hidden; }

    // x is d×b; returns (h+d)×b with the activated hidden block on top.
    Matrix augment(const Matrix& x) const;

private:
    AugmentConfig config_;
    Matrix g_hat_;
};

Augmenter init_augmenter(const AugmentConfig& config);

struct AugmentedBatch {
    Matrix x_tilde;  // (d+h) × b
    Matrix y;        // b × o
    std::size_t rank = 0;
    double rr = 0.0;

    std::size_t batch() const noexcept { return x_tilde.cols(); }
};

// Computes rank and RR of an already augmented block.
AugmentedBatch make_batch(Matrix x_tilde, Matrix y);

}  // namespace aopu
