#pragma once

#include "aopu/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testutil {

inline aopu::Matrix randn(std::size_t r, std::size_t c, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    aopu::Matrix m(r, c);
    for (double& v : m.data()) v = n(rng);
    return m;
}

// Triple-loop oracle, independent of the kernel layer.
inline aopu::Matrix naive_matmul(const aopu::Matrix& a, const aopu::Matrix& b) {
    aopu::Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += static_cast<long double>(a(i, k)) * b(k, j);
            c(i, j) = static_cast<double>(acc);
        }
    }
    return c;
}

inline aopu::Matrix naive_transpose(const aopu::Matrix& a) {
    aopu::Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    }
    return t;
}

inline double max_abs(const aopu::Matrix& a, const aopu::Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double fro(const aopu::Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

inline double rel_err(const aopu::Matrix& a, const aopu::Matrix& b) {
    aopu::Matrix d(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) d.data()[i] = a.data()[i] - b.data()[i];
    const double n = fro(b);
    return fro(d) / (n > 0.0 ? n : 1.0);
}

}  // namespace testutil
