#include "hybridsr/iteration.hpp"

#include <string>

#include "hybridsr/errors.hpp"
#include "hybridsr/kernels.hpp"

namespace hybridsr {

namespace {

void check_length(const LinearSystem& sys, std::size_t len) {
    if (len != sys.size()) {
        throw DimensionError("iterate has length " + std::to_string(len) + ", system order is " +
                             std::to_string(sys.size()));
    }
}

// sum_{j != i} a_ij x_j, split around the diagonal so a_ii x_i never enters.
inline double off_diagonal_sum(const kernels::KernelTable& k, const double* row, const double* x, std::size_t i,
                               std::size_t n) noexcept {
    return k.dot(row, x, i) + k.dot(row + i + 1, x + i + 1, n - i - 1);
}

}  // namespace

void jacobi_sr_step(const LinearSystem& sys, std::span<const double> x, double omega, std::span<double> out) {
    const std::size_t n = sys.size();
    check_length(sys, x.size());
    check_length(sys, out.size());
    const auto& k = kernels::active();
    const auto& a = sys.a();
    const auto& b = sys.b();
    for (std::size_t i = 0; i < n; ++i) {
        const double s = off_diagonal_sum(k, a.row(i).data(), x.data(), i, n);
        out[i] = (1.0 - omega) * x[i] + omega / a(i, i) * (b[i] - s);
    }
}

Vector jacobi_sr_step(const LinearSystem& sys, std::span<const double> x, double omega) {
    Vector out(x.size());
    jacobi_sr_step(sys, x, omega, out);
    return out;
}

void gauss_seidel_sr_step_inplace(const LinearSystem& sys, std::span<double> x, double omega) {
    const std::size_t n = sys.size();
    check_length(sys, x.size());
    const auto& k = kernels::active();
    const auto& a = sys.a();
    const auto& b = sys.b();
    for (std::size_t i = 0; i < n; ++i) {
        const double s = off_diagonal_sum(k, a.row(i).data(), x.data(), i, n);
        x[i] = (1.0 - omega) * x[i] + omega / a(i, i) * (b[i] - s);
    }
}

Vector gauss_seidel_sr_step(const LinearSystem& sys, std::span<const double> x, double omega) {
    Vector out(x.begin(), x.end());
    gauss_seidel_sr_step_inplace(sys, out, omega);
    return out;
}

Vector sr_step(Method method, const LinearSystem& sys, std::span<const double> x, double omega) {
    return method == Method::jacobi ? jacobi_sr_step(sys, x, omega) : gauss_seidel_sr_step(sys, x, omega);
}

Vector IterationOperator::apply(std::span<const double> x) const {
    const std::size_t n = h.size();
    if (x.size() != n) throw DimensionError("operator order and vector length differ");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = v[i];
        for (std::size_t j = 0; j < n; ++j) s += h(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

IterationOperator explicit_operator(const LinearSystem& sys, double omega, Method method) {
    const std::size_t n = sys.size();
    const auto& a = sys.a();
    const auto& b = sys.b();

    // Right factor K = (1-w) I - w D^-1 (L+U) for Jacobi, (1-w) I - w D^-1 U for Gauss-Seidel;
    // c = w D^-1 b.
    DenseMatrix k(n);
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double inv_d = 1.0 / a(i, i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                k(i, j) = 1.0 - omega;
            } else if (method == Method::jacobi || j > i) {
                k(i, j) = -omega * inv_d * a(i, j);
            }
        }
        c[i] = omega * inv_d * b[i];
    }
    if (method == Method::jacobi) return {std::move(k), std::move(c)};

    // M = I + w D^-1 L is unit lower triangular; solve M H = K and M V = c by forward substitution.
    DenseMatrix m = DenseMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) m(i, j) = omega * a(i, j) / a(i, i);
    }
    DenseMatrix h(n);
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t col = 0; col < n; ++col) {
            double s = k(i, col);
            for (std::size_t j = 0; j < i; ++j) s -= m(i, j) * h(j, col);
            h(i, col) = s;
        }
        double s = c[i];
        for (std::size_t j = 0; j < i; ++j) s -= m(i, j) * v[j];
        v[i] = s;
    }
    return {std::move(h), std::move(v)};
}

}  // namespace hybridsr
