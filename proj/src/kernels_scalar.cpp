// Scalar reference kernels. These define the expected results that every SIMD
// variant is tested against.

#include "hybridsr/kernels.hpp"

namespace hybridsr::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace hybridsr::kernels::scalar
