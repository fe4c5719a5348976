#include "aopu/baseline.hpp"
#include "aopu/error.hpp"
#include "aopu/linalg.hpp"
#include "aopu/model.hpp"
#include "test_util.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <limits>

using namespace aopu;
using testutil::naive_matmul;
using testutil::naive_transpose;
using testutil::randn;

namespace {

double mse_of_w(const Matrix& x, const Matrix& y, const Matrix& w) {
    const Matrix f = naive_matmul(naive_transpose(x), w);
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += (y.data()[i] - f.data()[i]) * (y.data()[i] - f.data()[i]);
    return acc / static_cast<double>(x.cols());
}

}  // namespace

TEST_CASE("mse gradient examples") {
    const Matrix x = Matrix::column({1.0, 2.0});
    const Matrix g = mse_gradient(x, Matrix::from_rows({{13}}), Matrix::column({3.0, 4.0}));
    CHECK(g == Matrix::column({-4.0, -8.0}));
    std::mt19937_64 rng(51);
    const Matrix x2 = randn(4, 3, rng), w = randn(4, 1, rng);
    CHECK(testutil::fro(mse_gradient(x2, naive_matmul(naive_transpose(x2), w), w)) < 1e-12);
}

TEST_CASE("mse gradient matches central finite differences") {
    std::mt19937_64 rng(52);
    std::uniform_int_distribution<std::size_t> bd(1, 6), pd(2, 8);
    for (int t = 0; t < 100; ++t) {
        const std::size_t b = bd(rng), p = pd(rng);
        const Matrix x = randn(p, b, rng), y = randn(b, 1, rng), w = randn(p, 1, rng);
        Matrix fd(p, 1);
        Matrix probe = w;
        for (std::size_t k = 0; k < p; ++k) {
            const double v = probe(k, 0);
            probe(k, 0) = v + 1e-6;
            const double up = mse_of_w(x, y, probe);
            probe(k, 0) = v - 1e-6;
            const double dn = mse_of_w(x, y, probe);
            probe(k, 0) = v;
            fd(k, 0) = (up - dn) / 2e-6;
        }
        CHECK(testutil::rel_err(mse_gradient(x, y, w), fd) < 1e-5);
    }
}

TEST_CASE("adam recursion") {
    RvflnnModel m(3, 1);
    CHECK(m.adam.lr == 0.005);
    CHECK(m.adam.beta1 == 0.9);
    CHECK(m.adam.beta2 == 0.999);
    CHECK(m.adam.eps == 1e-8);

    adam_step(m, Matrix(3, 1));
    CHECK(m.w_tilde == Matrix(3, 1));

    RvflnnModel c(2, 1);
    const Matrix g = Matrix::column({0.3, -2.0});
    adam_step(c, g);
    // bias-corrected first step: lr · g / (|g| + eps)
    CHECK(c.w_tilde(0, 0) == doctest::Approx(-0.005 * 0.3 / (0.3 + 1e-8)));
    CHECK(c.w_tilde(1, 0) == doctest::Approx(0.005 * 2.0 / (2.0 + 1e-8)));

    // second step by hand
    const double m1 = 0.19 * 0.3, v1 = 0.001999 * 0.09;
    const double mh = m1 / (1 - 0.81), vh = v1 / (1 - 0.999 * 0.999);
    const double w0 = c.w_tilde(0, 0);
    adam_step(c, g);
    CHECK(c.w_tilde(0, 0) == doctest::Approx(w0 - 0.005 * mh / (std::sqrt(vh) + 1e-8)));
    CHECK(c.t == 2);
}

TEST_CASE("adam rejects non-finite gradients without mutating state") {
    RvflnnModel m(2, 1);
    adam_step(m, Matrix::column({1.0, 1.0}));
    const RvflnnModel before = m;
    CHECK_THROWS_AS(adam_step(m, Matrix::column({std::numeric_limits<double>::quiet_NaN(), 1.0})), DivergenceError);
    CHECK(m.w_tilde == before.w_tilde);
    CHECK(m.m == before.m);
    CHECK(m.v == before.v);
    CHECK(m.t == before.t);
}

TEST_CASE("rvflnn determinism and structural equality with AOPU") {
    auto run = [] {
        std::mt19937_64 rng(53);
        RvflnnModel m(5, 1);
        for (int i = 0; i < 20; ++i) rvflnn_step(m, randn(5, 4, rng), randn(4, 1, rng));
        return m.w_tilde;
    };
    CHECK(run() == run());

    auto aug = std::make_shared<const Augmenter>(AugmentConfig{3, 4, Activation::Tanh, false, 9});
    AopuModel a(aug->output_dim(), 1, 1.0, aug);
    RvflnnModel r(aug->output_dim(), 1, {}, aug);
    std::mt19937_64 rng(54);
    const Matrix xt = aug->augment(randn(3, 6, rng));
    CHECK(forward(a, xt) == forward(r, xt));
}

TEST_CASE("rvflnn step reports the pre-update loss") {
    std::mt19937_64 rng(55);
    const Matrix x = randn(4, 3, rng), y = randn(3, 1, rng);
    RvflnnModel m(4, 1);
    const auto rep = rvflnn_step(m, x, y);
    CHECK(rep.loss == doctest::Approx(mse_of_w(x, y, Matrix(4, 1))));
    CHECK(rep.grad_norm == doctest::Approx(testutil::fro(mse_gradient(x, y, Matrix(4, 1)))));
}

TEST_CASE("linear MVE examples") {
    const Matrix x = Matrix::from_rows({{-1, 1, -1, 1}});
    const LinearMve a = linear_mve_fit(x, Matrix::from_rows({{-2, 2, -2, 2}}));
    CHECK(a.w(0, 0) == doctest::Approx(2.0));
    CHECK(std::abs(a.offset(0, 0)) < 1e-12);

    const Matrix x2 = Matrix::from_rows({{0, 1, 2, 3, 5}});
    Matrix y2(1, 5);
    for (std::size_t i = 0; i < 5; ++i) y2(0, i) = 2 * x2(0, i) + 3;
    const LinearMve b = linear_mve_fit(x2, y2);
    CHECK(b.w(0, 0) == doctest::Approx(2.0));
    CHECK(b.offset(0, 0) == doctest::Approx(3.0));
    CHECK(testutil::max_abs(b.predict(x2), y2) < 1e-12);

    CHECK_THROWS_AS(linear_mve_fit(Matrix(2, 1), Matrix(1, 1)), InvalidInput);
}

TEST_CASE("linear MVE equals least squares with intercept") {
    std::mt19937_64 rng(56);
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 3, o = 2, n = 200;
        const Matrix x = randn(d, n, rng);
        const Matrix y = randn(o, n, rng);
        const LinearMve fit = linear_mve_fit(x, y);
        Eigen::MatrixXd xa(n, d + 1), ya(n, o);
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t i = 0; i < d; ++i) xa(c, i) = x(i, c);
            xa(c, d) = 1.0;
            for (std::size_t i = 0; i < o; ++i) ya(c, i) = y(i, c);
        }
        const Eigen::MatrixXd beta = xa.colPivHouseholderQr().solve(ya);
        for (std::size_t i = 0; i < o; ++i) {
            for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(fit.w(i, j) - beta(j, i)) < 1e-8);
            CHECK(std::abs(fit.offset(i, 0) - beta(d, i)) < 1e-8);
        }
    }
}

TEST_CASE("linear MVE beats perturbed estimators with unbiased offsets") {
    std::mt19937_64 rng(57);
    const std::size_t d = 3, n = 300;
    const Matrix x = randn(d, n, rng);
    Matrix y = naive_matmul(randn(1, d, rng), x);
    for (double& v : y.data()) v += 0.5;
    y += randn(1, n, rng, 0.2);
    const LinearMve fit = linear_mve_fit(x, y);
    auto mse = [&](const Matrix& w) {
        double xb[3] = {0, 0, 0}, yb = 0;
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t i = 0; i < d; ++i) xb[i] += x(i, c) / n;
            yb += y(0, c) / n;
        }
        double b = yb;
        for (std::size_t i = 0; i < d; ++i) b -= w(0, i) * xb[i];
        double acc = 0;
        for (std::size_t c = 0; c < n; ++c) {
            double f = b;
            for (std::size_t i = 0; i < d; ++i) f += w(0, i) * x(i, c);
            acc += (y(0, c) - f) * (y(0, c) - f);
        }
        return acc / n;
    };
    const double best = mse(fit.w);
    for (int k = 0; k < 100; ++k) {
        Matrix dw = randn(1, d, rng);
        dw = (0.1 / testutil::fro(dw)) * dw;
        CHECK(mse(fit.w + dw) >= best);
    }
}

TEST_CASE("zero-mean reduction") {
    std::mt19937_64 rng(58);
    const std::size_t d = 4, n = 100;
    Matrix x = randn(d, n, rng);
    Matrix y = randn(1, n, rng);
    for (std::size_t i = 0; i < d; ++i) {
        double mean = 0;
        for (std::size_t c = 0; c < n; ++c) mean += x(i, c) / n;
        for (std::size_t c = 0; c < n; ++c) x(i, c) -= mean;
    }
    double ym = 0;
    for (double v : y.data()) ym += v / n;
    for (double& v : y.data()) v -= ym;
    const LinearMve fit = linear_mve_fit(x, y);
    CHECK(std::abs(fit.offset(0, 0)) < 1e-8);
    // W = (x y)ᵀ pinv(x xᵀ): the inner-product form
    const Matrix ref = naive_transpose(naive_matmul(linalg::pinv(naive_matmul(x, naive_transpose(x))), naive_matmul(x, naive_transpose(y))));
    CHECK(testutil::max_abs(fit.w, ref) < 1e-10);
}

TEST_CASE("conditional mean MVE") {
    const DiscretePmf two{{0.0, 1.0}, {0.0, 2.0}, Matrix::from_rows({{0.25, 0.25}, {0.1, 0.4}})};
    CHECK(conditional_mean_mve(two, 0.0) == 1.0);
    CHECK(conditional_mean_mve(two, 1.0) == doctest::Approx(1.6));
    CHECK_THROWS_AS(conditional_mean_mve(two, 0.5), UndefinedConditional);

    const DiscretePmf holes{{0.0, 1.0}, {1.0, 2.0}, Matrix::from_rows({{0.5, 0.5}, {0.0, 0.0}})};
    CHECK_THROWS_AS(conditional_mean_mve(holes, 1.0), UndefinedConditional);

    const DiscretePmf det{{0.0, 1.0}, {-1.0, 4.0}, Matrix::from_rows({{0.3, 0.0}, {0.0, 0.7}})};
    CHECK(conditional_mean_mve(det, 0.0) == -1.0);
    CHECK(conditional_mean_mve(det, 1.0) == 4.0);

    CHECK_THROWS_AS(validate_pmf({{0.0}, {1.0}, Matrix::from_rows({{0.5}})}), InvalidInput);
    CHECK_THROWS_AS(validate_pmf({{0.0}, {1.0, 2.0}, Matrix::from_rows({{0.5}})}), InvalidInput);
    CHECK_THROWS_AS(validate_pmf({{0.0}, {1.0, 2.0}, Matrix::from_rows({{1.5, -0.5}})}), InvalidInput);
}

TEST_CASE("random 3×4 pmf: conditional mean wins the 0.01 grid") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        DiscretePmf pmf{{0, 1, 2}, {-1.0, 0.25, 0.5, 2.0}, Matrix(3, 4)};
        double total = 0;
        for (double& p : pmf.prob.data()) total += (p = u(rng));
        for (double& p : pmf.prob.data()) p /= total;
        for (std::size_t i = 0; i < 3; ++i) {
            const double cm = conditional_mean_mve(pmf, pmf.xs[i]);
            auto cmse = [&](double c) {
                double acc = 0, mass = 0;
                for (std::size_t j = 0; j < 4; ++j) {
                    acc += pmf.prob(i, j) * (pmf.ys[j] - c) * (pmf.ys[j] - c);
                    mass += pmf.prob(i, j);
                }
                return acc / mass;
            };
            const double at_cm = cmse(cm);
            for (int k = -100; k <= 200; ++k) CHECK(at_cm <= cmse(k * 0.01) + 1e-12);
        }
    }
}
