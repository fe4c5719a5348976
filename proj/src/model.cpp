#include "aopu/model.hpp"

#include "aopu/error.hpp"

#include <cmath>
#include <string>

namespace aopu {

namespace {

void require_rows(const Matrix& x_tilde, std::size_t expected, const char* op) {
    if (x_tilde.rows() != expected) {
        throw InvalidInput(std::string(op) + ": x̃ has " + std::to_string(x_tilde.rows()) +
                           " rows, model expects " + std::to_string(expected));
    }
}

}  // namespace

AopuModel::AopuModel(std::size_t feature_dim, std::size_t outputs, double lr_,
                     std::shared_ptr<const Augmenter> aug)
    : w_tilde(feature_dim, outputs), lr(lr_), augmenter(std::move(aug)) {
    if (!(lr > 0.0)) throw InvalidInput("AopuModel: learning rate must be positive");
    if (augmenter && augmenter->output_dim() != feature_dim) {
        throw InvalidInput("AopuModel: augmenter output dimension does not match W̃");
    }
}

Matrix forward(const AopuModel& model, const Matrix& x_tilde) {
    require_rows(x_tilde, model.feature_dim(), "forward");
    return matmul_tn(x_tilde, model.w_tilde);
}

DualState dual(const AopuModel& model, const Matrix& x_tilde) {
    require_rows(x_tilde, model.feature_dim(), "dual");
    return {matmul(x_tilde, matmul_tn(x_tilde, model.w_tilde)), content_hash(x_tilde)};
}

Matrix reconstruct(const linalg::GramInverse& gram, const Matrix& x_tilde, const Matrix& d) {
    if (d.rows() != x_tilde.rows()) throw InvalidInput("reconstruct: D and x̃ row counts differ");
    return gram.apply(matmul_tn(x_tilde, d));
}

Matrix reconstruct(const Matrix& x_tilde, const Matrix& d) {
    return reconstruct(linalg::GramInverse(x_tilde), x_tilde, d);
}

double loss(const Matrix& y, const Matrix& recon) {
    if (y.rows() != recon.rows() || y.cols() != recon.cols()) throw InvalidInput("loss: shape mismatch");
    if (y.rows() == 0) throw InvalidInput("loss: empty batch");
    double acc = 0.0;
    const auto a = y.data();
    const auto b = recon.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = a[i] - b[i];
        acc += r * r;
    }
    return acc / static_cast<double>(y.rows());
}

Matrix truncated_gradient(const linalg::GramInverse& gram, const Matrix& x_tilde, const Matrix& y,
                          const Matrix& d) {
    if (y.rows() != x_tilde.cols()) throw InvalidInput("truncated_gradient: y and x̃ batch sizes differ");
    Matrix residual = y - reconstruct(gram, x_tilde, d);
    const double scale = -2.0 / static_cast<double>(x_tilde.cols());
    return scale * matmul(x_tilde, gram.apply(residual));
}

Matrix truncated_gradient(const Matrix& x_tilde, const Matrix& y, const Matrix& d) {
    return truncated_gradient(linalg::GramInverse(x_tilde), x_tilde, y, d);
}

Matrix natural_gradient_reference(const Matrix& x_tilde, const Matrix& y, const Matrix& w_tilde) {
    if (y.rows() != x_tilde.cols() || w_tilde.rows() != x_tilde.rows()) {
        throw InvalidInput("natural_gradient_reference: shape mismatch");
    }
    const double scale = -2.0 / static_cast<double>(x_tilde.cols());
    const Matrix plain = scale * matmul(x_tilde, y - matmul_tn(x_tilde, w_tilde));
    const Matrix fisher = matmul_nt(x_tilde, x_tilde);
    return matmul(linalg::pinv_symmetric(fisher), plain);
}

StepReport step(AopuModel& model, const AugmentedBatch& batch) { return step(model, batch.x_tilde, batch.y); }

StepReport step(AopuModel& model, const Matrix& x_tilde, const Matrix& y) {
    require_rows(x_tilde, model.feature_dim(), "step");
    if (y.rows() != x_tilde.cols() || y.cols() != model.outputs()) {
        throw InvalidInput("step: target shape does not match batch/model");
    }
    const linalg::GramInverse gram(x_tilde);
    const Matrix d = matmul(x_tilde, matmul_tn(x_tilde, model.w_tilde));
    const Matrix recon = reconstruct(gram, x_tilde, d);
    const double pre_loss = loss(y, recon);
    const Matrix grad = truncated_gradient(gram, x_tilde, y, d);

    StepReport report{pre_loss, gram.rank_ratio(), gram.rank(), frobenius_norm(grad)};
    if (!std::isfinite(pre_loss) || !grad.all_finite()) {
        throw DivergenceError("AOPU step produced a non-finite " +
                                  std::string(std::isfinite(pre_loss) ? "gradient" : "loss") +
                                  " (batch RR " + std::to_string(report.rr) + ")",
                              report.rr);
    }
    Matrix updated = model.w_tilde - model.lr * grad;
    if (!updated.all_finite()) {
        throw DivergenceError("AOPU step overflowed W̃ (batch RR " + std::to_string(report.rr) + ")", report.rr);
    }
    model.w_tilde = std::move(updated);
    return report;
}

}  // namespace aopu
