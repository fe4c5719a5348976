#include "aopu/augment.hpp"
#include "aopu/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace aopu;
using testutil::randn;

TEST_CASE("activation closed forms") {
    CHECK(activate(Activation::Tanh, 0.0) == 0.0);
    CHECK(activate(Activation::SoftSign, 1.0) == 0.5);
    CHECK(activate(Activation::HardShrink, 0.3) == 0.0);
    CHECK(activate(Activation::HardShrink, 0.7) == 0.7);
    CHECK(activate(Activation::HardShrink, -0.7) == -0.7);
    CHECK(activate(Activation::SoftShrink, 0.7) == doctest::Approx(0.2));
    CHECK(activate(Activation::SoftShrink, -0.7) == doctest::Approx(-0.2));
    CHECK(activate(Activation::SoftShrink, 0.4) == 0.0);
    CHECK(activate(Activation::TanhShrink, 1.0) == doctest::Approx(1.0 - std::tanh(1.0)));
    CHECK(activate(Activation::Sigmoid, 0.0) == 0.5);
    CHECK(activate(Activation::Sigmoid, -800.0) == 0.0);
    CHECK(activate(Activation::Relu, -2.0) == 0.0);
    CHECK(activate(Activation::Relu6, 7.5) == 6.0);
    CHECK(activate(Activation::RRelu, -1.0) == doctest::Approx(-0.22917).epsilon(1e-4));
    CHECK(activate(Activation::LeakyRelu, -1.0) == -0.01);
    CHECK(activate(Activation::HardSwish, 1.0) == doctest::Approx(4.0 / 6.0));
    CHECK(activate(Activation::HardSwish, -4.0) == 0.0);
    // mish(1) = tanh(log(1 + e))
    CHECK(activate(Activation::Mish, 1.0) == doctest::Approx(0.86509).epsilon(1e-5));
    CHECK(activate(Activation::Mish, 1.0) == doctest::Approx(std::tanh(std::log(1.0 + std::exp(1.0)))));
    CHECK(std::isfinite(activate(Activation::Mish, 1000.0)));
}

TEST_CASE("activation names round-trip and reject unknowns") {
    CHECK(all_activations().size() == 12);
    for (Activation a : all_activations()) CHECK(parse_activation(activation_name(a)) == a);
    CHECK_THROWS_AS(parse_activation("swish"), InvalidInput);
    CHECK_THROWS_AS(activation_apply("Tanh", Matrix(1, 1)), InvalidInput);
    const Matrix m = Matrix::from_rows({{-1, 0, 2}});
    CHECK(activation_apply("relu", m) == Matrix::from_rows({{0, 0, 2}}));
}

TEST_CASE("zero-mean catalog, checked on the functions themselves") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    const std::size_t n = 1000000;
    std::vector<double> z(n);
    for (auto& v : z) v = nd(rng);
    for (Activation a : all_activations()) {
        double mean = 0.0;
        for (double v : z) mean += activate(a, v);
        mean /= static_cast<double>(n);
        CAPTURE(activation_name(a));
        if (is_zero_mean(a)) CHECK(std::abs(mean) < 0.01);
        if (a == Activation::Sigmoid || a == Activation::Relu6 || a == Activation::RRelu) CHECK(std::abs(mean) > 0.1);
    }
}

TEST_CASE("witness: tanh is not additive") {
    std::mt19937_64 rng(22);
    int witnessed = 0;
    for (int t = 0; t < 100; ++t) {
        const Matrix w = randn(3, 4, rng), x1 = randn(4, 1, rng), x2 = randn(4, 1, rng);
        Matrix sum = x1;
        sum += x2;
        const Matrix lhs = activation_apply(Activation::Tanh, testutil::naive_matmul(w, sum));
        Matrix rhs = activation_apply(Activation::Tanh, testutil::naive_matmul(w, x1));
        rhs += activation_apply(Activation::Tanh, testutil::naive_matmul(w, x2));
        if (testutil::max_abs(lhs, rhs) > 1e-6) ++witnessed;
    }
    CHECK(witnessed >= 99);
}

TEST_CASE("layer norm") {
    const Matrix c = layer_norm(Matrix::from_rows({{3, 1}, {3, -1}}));
    CHECK(c == Matrix::from_rows({{0, 1}, {0, -1}}));
    std::mt19937_64 rng(23);
    const Matrix r = layer_norm(randn(50, 3, rng, 4.0));
    for (std::size_t j = 0; j < 3; ++j) {
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < 50; ++i) mean += r(i, j) / 50.0;
        for (std::size_t i = 0; i < 50; ++i) var += (r(i, j) - mean) * (r(i, j) - mean) / 50.0;
        CHECK(std::abs(mean) < 1e-10);
        CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(layer_norm(Matrix(1, 3)), InvalidInput);
}

TEST_CASE("Ĝ is seeded, row-major N(0,1) and frozen") {
    AugmentConfig cfg{3, 5, Activation::Tanh, false, 42};
    const Augmenter a(cfg), b(cfg);
    CHECK(a.g_hat() == b.g_hat());
    CHECK(a.g_hat().rows() == 3);
    CHECK(a.g_hat().cols() == 5);

    std::mt19937_64 gen(42);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 5; ++j) CHECK(a.g_hat()(i, j) == nd(gen));
    }

    cfg.seed = 43;
    const Augmenter c(cfg);
    std::size_t same = 0;
    for (std::size_t k = 0; k < 15; ++k) same += a.g_hat().data()[k] == c.g_hat().data()[k];
    CHECK(same == 0);

    const auto before = content_hash(a.g_hat());
    std::mt19937_64 rng(24);
    for (int i = 0; i < 1000; ++i) (void)a.augment(randn(3, 2, rng));
    CHECK(content_hash(a.g_hat()) == before);
}

TEST_CASE("augment layout") {
    // d=1, h=1, Ĝ drawn by the augmenter; check the hidden block is on top.
    const Augmenter aug(AugmentConfig{1, 1, Activation::Tanh, false, 0});
    const double g = aug.g_hat()(0, 0);
    const Matrix xt = aug.augment(Matrix::from_rows({{0.5}}));
    CHECK(xt.rows() == 2);
    CHECK(xt(0, 0) == std::tanh(g * 0.5));
    CHECK(xt(1, 0) == 0.5);
    CHECK(std::tanh(1.0 * 0.5) == doctest::Approx(0.46212).epsilon(1e-5));

    const Augmenter none(AugmentConfig{4, 0, Activation::Tanh, false, 0});
    CHECK(none.g_hat().cols() == 0);
    std::mt19937_64 rng(25);
    const Matrix x = randn(4, 3, rng);
    CHECK(none.augment(x) == x);
    CHECK(none.output_dim() == 4);

    const Augmenter big(AugmentConfig{4, 6, Activation::Relu, false, 7});
    const Matrix y = big.augment(x);
    CHECK(y.rows() == 10);
    const Matrix h = activation_apply(Activation::Relu, testutil::naive_matmul(testutil::naive_transpose(big.g_hat()), x));
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(y(i, j) == doctest::Approx(h(i, j)).epsilon(1e-14));
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(y(6 + i, j) == x(i, j));
    }
    CHECK_THROWS_AS(big.augment(randn(3, 2, rng)), InvalidInput);
}

TEST_CASE("layer norm touches only the hidden block") {
    std::mt19937_64 rng(26);
    const Augmenter aug(AugmentConfig{3, 8, Activation::Tanh, true, 1});
    const Matrix x = randn(3, 4, rng, 3.0);
    const Matrix y = aug.augment(x);
    for (std::size_t j = 0; j < 4; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 8; ++i) mean += y(i, j) / 8.0;
        CHECK(std::abs(mean) < 1e-12);
        for (std::size_t i = 0; i < 3; ++i) CHECK(y(8 + i, j) == x(i, j));
    }
}

TEST_CASE("make_batch computes rank and RR") {
    const Matrix dup = Matrix::from_rows({{1, 1}, {2, 2}, {3, 3}});
    const auto b = make_batch(dup, Matrix::column({1.0, 2.0}));
    CHECK(b.rank == 1);
    CHECK(b.rr == 0.5);
    CHECK(b.batch() == 2);
    CHECK_THROWS_AS(make_batch(dup, Matrix::column({1.0, 2.0, 3.0})), InvalidInput);
    CHECK_THROWS_AS(make_batch(Matrix(3, 0), Matrix(0, 1)), InvalidInput);
}
