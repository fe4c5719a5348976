#include "aopu/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace aopu::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc = std::fma(x[i], y[i], acc);
    return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

#include "kernels_gemm.inl"

}  // namespace aopu::kernels::scalar
