#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace aopu {

// Dense row-major matrix of doubles. Value type; copies are deep.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, double fill);
    // Throws InvalidInput if data.size() != rows * cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix column(std::initializer_list<double> values);
    static Matrix column(std::span<const double> values);
    static Matrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    Matrix col(std::size_t c) const;
    Matrix transpose() const;
    bool all_finite() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Products dispatch to the active kernel ISA. Shape mismatches throw
// InvalidInput.
Matrix matmul(const Matrix& a, const Matrix& b);     // A·B
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // Aᵀ·B
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // A·Bᵀ

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix& operator+=(Matrix& a, const Matrix& b);
Matrix& operator-=(Matrix& a, const Matrix& b);

// ⟨A, B⟩ = Σ aᵢⱼ bᵢⱼ, sequential order.
double inner(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
// ‖A − B‖_F / max(‖B‖_F, floor); `floor` keeps comparisons against zero sane.
double relative_error(const Matrix& a, const Matrix& b, double floor = 1e-300);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Stacks blocks vertically; all must share a column count.
Matrix vconcat(const Matrix& top, const Matrix& bottom);
Matrix gather_columns(const Matrix& m, std::span<const std::size_t> cols);
Matrix symmetrize(const Matrix& m);

// FNV-1a over shape and raw bytes. Bit-level fingerprint for determinism checks.
std::uint64_t content_hash(const Matrix& m) noexcept;

}  // namespace aopu
