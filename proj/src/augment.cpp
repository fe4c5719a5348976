#include "aopu/augment.hpp"

#include "aopu/error.hpp"
#include "aopu/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <utility>

namespace aopu {

namespace {

constexpr std::array<std::pair<std::string_view, Activation>, 12> kNames{{
    {"tanh", Activation::Tanh},
    {"hardshrink", Activation::HardShrink},
    {"tanhshrink", Activation::TanhShrink},
    {"softsign", Activation::SoftSign},
    {"softshrink", Activation::SoftShrink},
    {"sigmoid", Activation::Sigmoid},
    {"relu", Activation::Relu},
    {"relu6", Activation::Relu6},
    {"rrelu", Activation::RRelu},
    {"leakyrelu", Activation::LeakyRelu},
    {"hardswish", Activation::HardSwish},
    {"mish", Activation::Mish},
}};

double softplus(double x) noexcept {
    // log(1 + eˣ) without overflow for large x.
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

Activation parse_activation(std::string_view name) {
    for (const auto& [n, a] : kNames)
        if (n == name) return a;
    throw InvalidInput("unknown activation '" + std::string(name) + "'");
}

std::string_view activation_name(Activation a) noexcept {
    for (const auto& [n, act] : kNames)
        if (act == a) return n;
    return "unknown";
}

const std::vector<Activation>& all_activations() {
    static const std::vector<Activation> all = [] {
        std::vector<Activation> v;
        for (const auto& entry : kNames) v.push_back(entry.second);
        return v;
    }();
    return all;
}

bool is_zero_mean(Activation a) noexcept {
    switch (a) {
        case Activation::Tanh:
        case Activation::HardShrink:
        case Activation::TanhShrink:
        case Activation::SoftSign:
        case Activation::SoftShrink:
            return true;
        default:
            return false;
    }
}

double activate(Activation a, double x) noexcept {
    switch (a) {
        case Activation::Tanh:
            return std::tanh(x);
        case Activation::HardShrink:
            return std::abs(x) > kShrinkLambda ? x : 0.0;
        case Activation::TanhShrink:
            return x - std::tanh(x);
        case Activation::SoftSign:
            return x / (1.0 + std::abs(x));
        case Activation::SoftShrink:
            if (x > kShrinkLambda) return x - kShrinkLambda;
            if (x < -kShrinkLambda) return x + kShrinkLambda;
            return 0.0;
        case Activation::Sigmoid:
            return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
        case Activation::Relu:
            return x > 0.0 ? x : 0.0;
        case Activation::Relu6:
            return std::clamp(x, 0.0, 6.0);
        case Activation::RRelu:
            return x >= 0.0 ? x : kRReluSlope * x;
        case Activation::LeakyRelu:
            return x >= 0.0 ? x : kLeakyReluSlope * x;
        case Activation::HardSwish:
            return x * std::clamp(x + 3.0, 0.0, 6.0) / 6.0;
        case Activation::Mish:
            return x * std::tanh(softplus(x));
    }
    return x;
}

Matrix activation_apply(Activation a, const Matrix& m) {
    Matrix out = m;
    for (double& v : out.data()) v = activate(a, v);
    return out;
}

Matrix activation_apply(std::string_view name, const Matrix& m) { return activation_apply(parse_activation(name), m); }

Matrix layer_norm(const Matrix& m) {
    if (m.rows() < 2) throw InvalidInput("layer_norm: need at least 2 features per sample");
    const std::size_t n = m.rows();
    Matrix out = m;
    std::vector<double> mean(m.cols(), 0.0);
    std::vector<double> var(m.cols(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) mean[c] += row[c];
    }
    for (double& v : mean) v /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double d = row[c] - mean[c];
            var[c] += d * d;
        }
    }
    std::vector<double> inv_std(m.cols(), 0.0);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double v = var[c] / static_cast<double>(n);
        inv_std[c] = v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;
    }
    for (std::size_t r = 0; r < n; ++r) {
        auto row = out.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) row[c] = (row[c] - mean[c]) * inv_std[c];
    }
    return out;
}

Augmenter::Augmenter(const AugmentConfig& config) : config_(config), g_hat_(config.input_dim, config.hidden) {
    if (config.input_dim == 0) throw InvalidInput("augment: input dimension must be >= 1");
    std::mt19937_64 gen(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : g_hat_.data()) v = normal(gen);
}

Matrix Augmenter::augment(const Matrix& x) const {
    if (x.rows() != config_.input_dim) {
        throw InvalidInput("augment: expected " + std::to_string(config_.input_dim) + " input rows, got " +
                           std::to_string(x.rows()));
    }
    if (config_.hidden == 0) return x;
    Matrix hidden = activation_apply(config_.activation, matmul_tn(g_hat_, x));
    if (config_.layer_norm) hidden = layer_norm(hidden);
    return vconcat(hidden, x);
}

Augmenter init_augmenter(const AugmentConfig& config) { return Augmenter(config); }

AugmentedBatch make_batch(Matrix x_tilde, Matrix y) {
    if (y.rows() != x_tilde.cols()) {
        throw InvalidInput("make_batch: " + std::to_string(x_tilde.cols()) + " samples but " +
                           std::to_string(y.rows()) + " targets");
    }
    if (x_tilde.cols() == 0) throw InvalidInput("make_batch: empty batch");
    AugmentedBatch batch{std::move(x_tilde), std::move(y), 0, 0.0};
    batch.rank = linalg::rank(batch.x_tilde);
    batch.rr = static_cast<double>(batch.rank) / static_cast<double>(batch.batch());
    return batch;
}

}  // namespace aopu
