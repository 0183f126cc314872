#pragma once
// Data-parallel inner loops shared by the dense solvers.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on aarch64) are compiled into separate translation units and
// picked once at startup from CPU feature detection. Variants agree with the
// scalar reference up to floating-point reassociation, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace hybridsr::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;

using DotFn = double (*)(const double* a, const double* b, std::size_t n) noexcept;
// y[i] += alpha * x[i]
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n) noexcept;

struct KernelTable {
    Backend backend;
    DotFn dot;
    AxpyFn axpy;
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace scalar

#if defined(HYBRIDSR_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(HYBRIDSR_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace neon
#endif

/// True when the backend was compiled in and the running CPU supports it.
bool available(Backend b) noexcept;

/// Table for a specific backend. Throws std::invalid_argument if unavailable.
const KernelTable& table(Backend b);

/// Best available backend on this machine.
Backend preferred_backend() noexcept;

/// Kernels used by the solver library. Defaults to preferred_backend().
const KernelTable& active() noexcept;

/// Process-wide switch of the active backend. Meant for startup configuration
/// and tests; not synchronized with solver calls running on other threads.
void use_backend(Backend b);

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

}  // namespace hybridsr::kernels
