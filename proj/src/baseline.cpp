#include "aopu/baseline.hpp"

#include "aopu/error.hpp"
#include "aopu/linalg.hpp"

#include <cmath>
#include <string>

namespace aopu {

RvflnnModel::RvflnnModel(std::size_t feature_dim, std::size_t outputs, AdamConfig adam_,
                         std::shared_ptr<const Augmenter> aug)
    : w_tilde(feature_dim, outputs),
      m(feature_dim, outputs),
      v(feature_dim, outputs),
      adam(adam_),
      augmenter(std::move(aug)) {
    if (!(adam.lr > 0.0)) throw InvalidInput("RvflnnModel: learning rate must be positive");
    if (augmenter && augmenter->output_dim() != feature_dim) {
        throw InvalidInput("RvflnnModel: augmenter output dimension does not match W̃");
    }
}

Matrix forward(const RvflnnModel& model, const Matrix& x_tilde) {
    if (x_tilde.rows() != model.feature_dim()) throw InvalidInput("forward: x̃ row count does not match model");
    return matmul_tn(x_tilde, model.w_tilde);
}

Matrix mse_gradient(const Matrix& x_tilde, const Matrix& y, const Matrix& w_tilde) {
    if (y.rows() != x_tilde.cols() || w_tilde.rows() != x_tilde.rows() || y.cols() != w_tilde.cols()) {
        throw InvalidInput("mse_gradient: shape mismatch");
    }
    const double scale = -2.0 / static_cast<double>(x_tilde.cols());
    return scale * matmul(x_tilde, y - matmul_tn(x_tilde, w_tilde));
}

void adam_step(RvflnnModel& model, const Matrix& grad) {
    if (grad.rows() != model.w_tilde.rows() || grad.cols() != model.w_tilde.cols()) {
        throw InvalidInput("adam_step: gradient shape does not match W̃");
    }
    if (!grad.all_finite()) throw DivergenceError("RVFLNN gradient is non-finite");

    const AdamConfig& c = model.adam;
    const std::uint64_t t = model.t + 1;
    const double bias1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
    const double bias2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));

    Matrix m = model.m;
    Matrix v = model.v;
    Matrix w = model.w_tilde;
    const auto g = grad.data();
    auto md = m.data();
    auto vd = v.data();
    auto wd = w.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
        md[i] = c.beta1 * md[i] + (1.0 - c.beta1) * g[i];
        vd[i] = c.beta2 * vd[i] + (1.0 - c.beta2) * g[i] * g[i];
        const double m_hat = md[i] / bias1;
        const double v_hat = vd[i] / bias2;
        wd[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
    if (!w.all_finite()) throw DivergenceError("RVFLNN Adam update is non-finite");
    model.m = std::move(m);
    model.v = std::move(v);
    model.w_tilde = std::move(w);
    model.t = t;
}

RvflnnStepReport rvflnn_step(RvflnnModel& model, const Matrix& x_tilde, const Matrix& y) {
    const Matrix residual = y - forward(model, x_tilde);
    double sq = 0.0;
    for (double r : residual.data()) sq += r * r;
    const double mse = sq / static_cast<double>(y.rows());
    if (!std::isfinite(mse)) throw DivergenceError("RVFLNN loss is non-finite");
    const Matrix grad = (-2.0 / static_cast<double>(x_tilde.cols())) * matmul(x_tilde, residual);
    adam_step(model, grad);
    return {mse, frobenius_norm(grad)};
}

Matrix LinearMve::predict(const Matrix& x) const {
    Matrix out = matmul(w, x);
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (double& val : out.row(r)) val += offset(r, 0);
    return out;
}

LinearMve linear_mve_fit(const Matrix& x, const Matrix& y) {
    const std::size_t n = x.cols();
    if (y.cols() != n) throw InvalidInput("linear_mve_fit: X and Y sample counts differ");
    if (n < 2) throw InvalidInput("linear_mve_fit: need at least 2 samples");

    auto row_means = [n](const Matrix& m) {
        Matrix mean(m.rows(), 1);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            double acc = 0.0;
            for (double v : m.row(r)) acc += v;
            mean(r, 0) = acc / static_cast<double>(n);
        }
        return mean;
    };
    auto centered = [](const Matrix& m, const Matrix& mean) {
        Matrix out = m;
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (double& v : out.row(r)) v -= mean(r, 0);
        return out;
    };

    const Matrix x_mean = row_means(x);
    const Matrix y_mean = row_means(y);
    const Matrix xc = centered(x, x_mean);
    const Matrix yc = centered(y, y_mean);
    const double inv_n = 1.0 / static_cast<double>(n);
    const Matrix r_xx = inv_n * matmul_nt(xc, xc);
    const Matrix r_yx = inv_n * matmul_nt(yc, xc);

    LinearMve fit;
    fit.w = matmul(r_yx, linalg::pinv_symmetric(r_xx));
    fit.offset = y_mean - matmul(fit.w, x_mean);
    return fit;
}

void validate_pmf(const DiscretePmf& pmf) {
    if (pmf.prob.rows() != pmf.xs.size() || pmf.prob.cols() != pmf.ys.size()) {
        throw InvalidInput("pmf: probability table does not match grid");
    }
    double total = 0.0;
    for (double p : pmf.prob.data()) {
        if (!(p >= 0.0)) throw InvalidInput("pmf: negative or NaN mass");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("pmf: mass sums to " + std::to_string(total));
}

double conditional_mean_mve(const DiscretePmf& pmf, double x_query) {
    validate_pmf(pmf);
    for (std::size_t i = 0; i < pmf.xs.size(); ++i) {
        if (pmf.xs[i] != x_query) continue;
        double mass = 0.0;
        double first_moment = 0.0;
        for (std::size_t j = 0; j < pmf.ys.size(); ++j) {
            mass += pmf.prob(i, j);
            first_moment += pmf.ys[j] * pmf.prob(i, j);
        }
        if (mass <= 0.0) throw UndefinedConditional("p(x = " + std::to_string(x_query) + ") is zero");
        return first_moment / mass;
    }
    throw UndefinedConditional("x = " + std::to_string(x_query) + " is outside the pmf support");
}

}  // namespace aopu
