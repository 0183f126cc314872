#include "hybridsr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "hybridsr/errors.hpp"
#include "hybridsr/kernels.hpp"

namespace hybridsr {

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> entries) : n_(n), data_(std::move(entries)) {
    if (data_.size() != n * n) {
        throw DimensionError("matrix of order " + std::to_string(n) + " needs " + std::to_string(n * n) +
                             " entries, got " + std::to_string(data_.size()));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

LinearSystem::LinearSystem(DenseMatrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    const std::size_t n = a_.size();
    if (n == 0) throw DimensionError("linear system must have at least one unknown");
    if (b_.size() != n) {
        throw DimensionError("right-hand side has length " + std::to_string(b_.size()) + ", expected " +
                             std::to_string(n));
    }
    for (double v : a_.entries()) {
        if (!std::isfinite(v)) throw InvalidArgument("coefficient matrix has a nonfinite entry");
    }
    for (double v : b_) {
        if (!std::isfinite(v)) throw InvalidArgument("right-hand side has a nonfinite entry");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(a_(i, i)) < kMinDiagonal) {
            throw InvalidArgument("diagonal entry " + std::to_string(i + 1) + " is too close to zero");
        }
    }
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.size()) {
        throw DimensionError("matvec: matrix order " + std::to_string(a.size()) + " vs vector length " +
                             std::to_string(x.size()));
    }
    const auto& k = kernels::active();
    Vector y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = k.dot(a.row(i).data(), x.data(), x.size());
    return y;
}

double norm2(std::span<const double> v) noexcept {
    double sum = 0.0;
    for (double c : v) sum += c * c;
    return std::sqrt(sum);
}

double residual_norm(const LinearSystem& sys, std::span<const double> x) {
    const std::size_t n = sys.size();
    if (x.size() != n) {
        throw DimensionError("residual_norm: system order " + std::to_string(n) + " vs vector length " +
                             std::to_string(x.size()));
    }
    const auto& k = kernels::active();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = k.dot(sys.a().row(i).data(), x.data(), n) - sys.b()[i];
        sum += r * r;
    }
    return std::sqrt(sum);
}

Vector direct_solve(const LinearSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<double> m(sys.a().entries().begin(), sys.a().entries().end());
    Vector x = sys.b();

    double scale = 0.0;
    for (double v : m) scale = std::max(scale, std::abs(v));
    const double tiny = scale * static_cast<double>(n) * std::numeric_limits<double>::epsilon();

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
        }
        if (!(std::abs(m[pivot * n + col]) > tiny)) {
            throw SingularMatrixError("matrix is singular to working precision (column " +
                                      std::to_string(col + 1) + ")");
        }
        if (pivot != col) {
            std::swap_ranges(m.begin() + pivot * n, m.begin() + (pivot + 1) * n, m.begin() + col * n);
            std::swap(x[pivot], x[col]);
        }
        const double p = m[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r * n + col] / p;
            if (f == 0.0) continue;
            m[r * n + col] = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
            x[r] -= f * x[col];
        }
    }

    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= m[i * n + c] * x[c];
        x[i] = s / m[i * n + i];
    }
    return x;
}

}  // namespace hybridsr
