#include "aopu/matrix.hpp"

#include "aopu/error.hpp"
#include "aopu/kernels.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace aopu {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidInput("Matrix: " + std::to_string(data_.size()) + " values for shape " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw InvalidInput("Matrix::from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::column(std::initializer_list<double> values) {
    return Matrix(values.size(), 1, std::vector<double>(values));
}

Matrix Matrix::column(std::span<const double> values) {
    return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

Matrix Matrix::col(std::size_t c) const {
    Matrix out(rows_, 1);
    for (std::size_t r = 0; r < rows_; ++r) out(r, 0) = (*this)(r, c);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

bool Matrix::all_finite() const noexcept {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidInput("matmul: " + shape(a) + " · " + shape(b));
    Matrix c(a.rows(), b.cols());
    if (c.empty()) return c;
    if (a.cols() == 0) return c;
    kernels::gemm_nn(a.rows(), b.cols(), a.cols(), a.data().data(), a.cols(), b.data().data(), b.cols(),
                     c.data().data(), c.cols());
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InvalidInput("matmul_tn: " + shape(a) + "ᵀ · " + shape(b));
    Matrix c(a.cols(), b.cols());
    if (c.empty() || a.rows() == 0) return c;
    kernels::gemm_tn(a.cols(), b.cols(), a.rows(), a.data().data(), a.cols(), b.data().data(), b.cols(),
                     c.data().data(), c.cols());
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw InvalidInput("matmul_nt: " + shape(a) + " · " + shape(b) + "ᵀ");
    Matrix c(a.rows(), b.rows());
    if (c.empty()) return c;
    kernels::gemm_nt(a.rows(), b.rows(), a.cols(), a.data().data(), a.cols(), b.data().data(), b.cols(),
                     c.data().data(), c.cols());
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    return out += b;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    return out -= b;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

Matrix& operator+=(Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "operator+");
    auto lhs = a.data();
    auto rhs = b.data();
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] += rhs[i];
    return a;
}

Matrix& operator-=(Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "operator-");
    auto lhs = a.data();
    auto rhs = b.data();
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
    return a;
}

double inner(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "inner");
    double acc = 0.0;
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double frobenius_norm(const Matrix& a) {
    // Scaled sum of squares: immune to overflow for the huge-but-finite values
    // a diverging run produces.
    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double acc = 0.0;
    for (double v : a.data()) {
        const double s = v / scale;
        acc += s * s;
    }
    return scale * std::sqrt(acc);
}

double relative_error(const Matrix& a, const Matrix& b, double floor) {
    return frobenius_norm(a - b) / std::max(frobenius_norm(b), floor);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

Matrix vconcat(const Matrix& top, const Matrix& bottom) {
    if (top.cols() != bottom.cols()) {
        throw InvalidInput("vconcat: column mismatch " + shape(top) + " / " + shape(bottom));
    }
    std::vector<double> data;
    data.reserve(top.size() + bottom.size());
    data.insert(data.end(), top.data().begin(), top.data().end());
    data.insert(data.end(), bottom.data().begin(), bottom.data().end());
    return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(data));
}

Matrix gather_columns(const Matrix& m, std::span<const std::size_t> cols) {
    Matrix out(m.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] >= m.cols()) throw InvalidInput("gather_columns: index out of range");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto src = m.row(r);
        auto dst = out.row(r);
        for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
    }
    return out;
}

Matrix symmetrize(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("symmetrize: matrix is " + shape(m));
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + m(j, i));
    return out;
}

std::uint64_t content_hash(const Matrix& m) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    const std::uint64_t r = m.rows();
    const std::uint64_t c = m.cols();
    mix(&r, sizeof r);
    mix(&c, sizeof c);
    mix(m.data().data(), m.size() * sizeof(double));
    return h;
}

}  // namespace aopu
