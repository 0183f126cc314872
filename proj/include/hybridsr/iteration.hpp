#pragma once
// One-step relaxed Jacobi (JOR) and relaxed Gauss-Seidel (SOR) iterations.

#include <span>

#include "hybridsr/linalg.hpp"

namespace hybridsr {

enum class Method { jacobi, gauss_seidel };

/// x'_i = (1-w) x_i + (w / a_ii) (b_i - sum_{j != i} a_ij x_j), every row read from the old x.
Vector jacobi_sr_step(const LinearSystem& sys, std::span<const double> x, double omega);

/// Forward sweep: rows j < i already hold their updated values when row i is computed.
Vector gauss_seidel_sr_step(const LinearSystem& sys, std::span<const double> x, double omega);

/// In-place variants for the hot loop; `out` must not alias `x` for Jacobi.
void jacobi_sr_step(const LinearSystem& sys, std::span<const double> x, double omega, std::span<double> out);
void gauss_seidel_sr_step_inplace(const LinearSystem& sys, std::span<double> x, double omega);

Vector sr_step(Method method, const LinearSystem& sys, std::span<const double> x, double omega);

/// Affine form x -> H x + V of one step.
struct IterationOperator {
    DenseMatrix h;
    Vector v;

    Vector apply(std::span<const double> x) const;
};

/// Forms H and V explicitly with plain loops (no SIMD kernels, no sweep code).
/// O(n^3) for Gauss-Seidel; intended as a test oracle for small n.
///   jacobi:       H = (1-w) I - w D^-1 (L+U),              V = w D^-1 b
///   gauss_seidel: H = (I + w D^-1 L)^-1 ((1-w) I - w D^-1 U), V = w (I + w D^-1 L)^-1 D^-1 b
IterationOperator explicit_operator(const LinearSystem& sys, double omega, Method method);

}  // namespace hybridsr
