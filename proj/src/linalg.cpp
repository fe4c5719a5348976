#include "aopu/linalg.hpp"

#include "aopu/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace aopu::linalg {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
    Matrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index r = 0; r < e.rows(); ++r)
        for (Eigen::Index c = 0; c < e.cols(); ++c) out(r, c) = e(r, c);
    return out;
}

void require_finite(const Matrix& a, const char* op) {
    if (!a.all_finite()) throw InvalidInput(std::string(op) + ": matrix has non-finite entries");
}

Eigen::BDCSVD<Eigen::MatrixXd> decompose(const Matrix& a, unsigned options, const char* op) {
    require_finite(a, op);
    Eigen::MatrixXd dense = view(a);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, options);
    if (svd.info() != Eigen::Success) {
        throw NumericalFailure(std::string(op) + ": SVD did not converge for " + std::to_string(a.rows()) +
                               "x" + std::to_string(a.cols()) + " input");
    }
    return svd;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double resolve_tol(std::optional<double> tol, std::size_t rows, std::size_t cols) {
    const double t = tol.value_or(default_tolerance(rows, cols));
    if (!(t >= 0.0)) throw InvalidInput("singular-value tolerance must be >= 0");
    return t;
}

}  // namespace

double default_tolerance(std::size_t rows, std::size_t cols) noexcept {
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

SvdResult svd(const Matrix& a) {
    if (a.empty()) {
        return {Matrix(a.rows(), 0), {}, Matrix(a.cols(), 0)};
    }
    auto dec = decompose(a, Eigen::ComputeThinU | Eigen::ComputeThinV, "svd");
    return {from_eigen(dec.matrixU()), to_vector(dec.singularValues()), from_eigen(dec.matrixV())};
}

std::vector<double> singular_values(const Matrix& a) {
    if (a.empty()) return {};
    return to_vector(decompose(a, 0, "singular_values").singularValues());
}

std::size_t rank_from_singular_values(const std::vector<double>& s, double tol) {
    if (s.empty() || s.front() <= 0.0) return 0;
    const double cutoff = tol * s.front();
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [cutoff](double v) { return v > cutoff; }));
}

std::size_t rank(const Matrix& a, std::optional<double> tol) {
    return rank_from_singular_values(singular_values(a), resolve_tol(tol, a.rows(), a.cols()));
}

Matrix pinv(const Matrix& a, std::optional<double> tol) {
    const double t = resolve_tol(tol, a.rows(), a.cols());
    Matrix out(a.cols(), a.rows());
    if (a.empty()) return out;
    const SvdResult dec = svd(a);
    const std::size_t r = rank_from_singular_values(dec.s, t);
    // out = V_r · diag(1/s) · U_rᵀ, accumulated rank-one term by term.
    for (std::size_t k = 0; k < r; ++k) {
        const double inv = 1.0 / dec.s[k];
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double vik = dec.v(i, k) * inv;
            auto dst = out.row(i);
            for (std::size_t j = 0; j < a.rows(); ++j) dst[j] += vik * dec.u(j, k);
        }
    }
    return out;
}

Matrix pinv_symmetric(const Matrix& a, std::optional<double> tol) { return pinv(symmetrize(a), tol); }

double rank_ratio(const Matrix& x_tilde, std::size_t batch) {
    if (batch == 0) throw InvalidInput("rank_ratio: batch size is zero");
    if (x_tilde.cols() != batch) {
        throw InvalidInput("rank_ratio: x̃ has " + std::to_string(x_tilde.cols()) + " columns, batch is " +
                           std::to_string(batch));
    }
    return static_cast<double>(rank(x_tilde)) / static_cast<double>(batch);
}

GramInverse::GramInverse(const Matrix& x, std::optional<double> tol) : batch_(x.cols()) {
    if (batch_ == 0) throw InvalidInput("GramInverse: batch size is zero");
    const double t = resolve_tol(tol, x.rows(), x.cols());
    if (x.rows() == 0) {
        v_kept_ = Matrix(batch_, 0);
        return;
    }
    auto dec = decompose(x, Eigen::ComputeThinV, "GramInverse");
    s_ = to_vector(dec.singularValues());
    rank_ = rank_from_singular_values(s_, t);
    const Eigen::MatrixXd& v = dec.matrixV();
    v_kept_ = Matrix(batch_, rank_);
    for (std::size_t i = 0; i < batch_; ++i)
        for (std::size_t k = 0; k < rank_; ++k) v_kept_(i, k) = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    inv_sq_.resize(rank_);
    for (std::size_t k = 0; k < rank_; ++k) inv_sq_[k] = 1.0 / (s_[k] * s_[k]);
}

double GramInverse::rank_ratio() const noexcept {
    return static_cast<double>(rank_) / static_cast<double>(batch_);
}

Matrix GramInverse::apply(const Matrix& m) const {
    if (m.rows() != batch_) {
        throw InvalidInput("GramInverse::apply: expected " + std::to_string(batch_) + " rows, got " +
                           std::to_string(m.rows()));
    }
    Matrix coeff = matmul_tn(v_kept_, m);  // rank × o
    for (std::size_t k = 0; k < rank_; ++k) {
        for (double& c : coeff.row(k)) c *= inv_sq_[k];
    }
    return matmul(v_kept_, coeff);
}

Matrix GramInverse::matrix() const { return apply(Matrix::identity(batch_)); }

}  // namespace aopu::linalg
