#pragma once
// Dense matrix/vector arithmetic in 64-bit floating point.

#include <cstddef>
#include <span>
#include <vector>

namespace hybridsr {

using Vector = std::vector<double>;

/// Smallest admissible |a_ii| of a LinearSystem.
inline constexpr double kMinDiagonal = 1e-12;

/// Square n x n matrix stored row-major.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n);
    /// Builds from row-major entries; entries.size() must equal n*n.
    DenseMatrix(std::size_t n, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }

    std::span<const double> entries() const noexcept { return data_; }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Ax = b with a square, finite A whose diagonal is bounded away from zero.
class LinearSystem {
public:
    /// Throws DimensionError on shape mismatch and InvalidArgument on a
    /// nonfinite entry or |a_ii| < kMinDiagonal.
    LinearSystem(DenseMatrix a, Vector b);

    std::size_t size() const noexcept { return a_.size(); }
    const DenseMatrix& a() const noexcept { return a_; }
    const Vector& b() const noexcept { return b_; }

    bool operator==(const LinearSystem&) const = default;

private:
    DenseMatrix a_;
    Vector b_;
};

Vector matvec(const DenseMatrix& a, std::span<const double> x);

/// Euclidean norm of Ax - b.
double residual_norm(const LinearSystem& sys, std::span<const double> x);

double norm2(std::span<const double> v) noexcept;

/// Gaussian elimination with partial pivoting. Independent of the SIMD kernels
/// so it can serve as a reference for the iterative solvers.
Vector direct_solve(const LinearSystem& sys);

}  // namespace hybridsr
