#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hybridsr/evolution.hpp"
#include "hybridsr/kernels.hpp"
#include "hybridsr/problems.hpp"
#include "test_util.hpp"

using namespace hybridsr;
namespace k = hybridsr::kernels;

namespace {

// Lengths straddling every unroll boundary of the SIMD loops.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33, 63, 64, 65, 199, 200, 257};

std::vector<k::Backend> simd_backends() {
    std::vector<k::Backend> out;
    for (auto b : {k::Backend::avx2, k::Backend::neon}) {
        if (k::available(b)) out.push_back(b);
    }
    return out;
}

struct BackendGuard {
    k::Backend saved = k::active().backend;
    ~BackendGuard() { k::use_backend(saved); }
};

}  // namespace

TEST_CASE("scalar kernels match hand values") {
    const double a[] = {1, 2, 3};
    const double b[] = {4, -5, 6};
    CHECK(k::scalar::dot(a, b, 3) == 12.0);
    CHECK(k::scalar::dot(a, b, 0) == 0.0);
    double y[] = {1, 1, 1};
    k::scalar::axpy(2.0, a, y, 3);
    CHECK(y[0] == 3.0);
    CHECK(y[1] == 5.0);
    CHECK(y[2] == 7.0);
}

TEST_CASE("preferred backend is available and active by default") {
    CHECK(k::available(k::Backend::scalar));
    CHECK(k::available(k::preferred_backend()));
    CHECK(k::active().backend == k::preferred_backend());
    MESSAGE("active kernels: " << k::backend_name(k::active().backend));
}

TEST_CASE("unavailable backend is rejected") {
    for (auto b : {k::Backend::avx2, k::Backend::neon}) {
        if (!k::available(b)) CHECK_THROWS_AS(k::table(b), std::invalid_argument);
    }
}

TEST_CASE("SIMD dot agrees with scalar reference") {
    Rng rng(11);
    for (auto backend : simd_backends()) {
        const auto& t = k::table(backend);
        for (std::size_t n : kLengths) {
            for (int trial = 0; trial < 20; ++trial) {
                auto a = testutil::random_vector(n, rng, -100, 100);
                auto b = testutil::random_vector(n, rng, -100, 100);
                double mag = 0.0;
                for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
                const double ref = k::scalar::dot(a.data(), b.data(), n);
                const double got = t.dot(a.data(), b.data(), n);
                CHECK(std::abs(got - ref) <= 1e-14 * std::max(1.0, mag));
            }
        }
    }
}

TEST_CASE("SIMD axpy agrees with scalar reference") {
    Rng rng(12);
    for (auto backend : simd_backends()) {
        const auto& t = k::table(backend);
        for (std::size_t n : kLengths) {
            const auto x = testutil::random_vector(n, rng, -10, 10);
            const auto y0 = testutil::random_vector(n, rng, -10, 10);
            const double alpha = rng.uniform(-3, 3);
            auto ref = y0;
            auto got = y0;
            k::scalar::axpy(alpha, x.data(), ref.data(), n);
            t.axpy(alpha, x.data(), got.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                // FMA skips one rounding; the difference is at most one ulp of the terms.
                CHECK(std::abs(got[i] - ref[i]) <= 4e-16 * (std::abs(y0[i]) + std::abs(alpha * x[i])) + 1e-300);
            }
        }
    }
}

TEST_CASE("solver runs agree across kernel backends") {
    BackendGuard guard;
    const auto sys = generate_problem(builtin_problem(ProblemId::p1, 200, 3));
    for (auto backend : simd_backends()) {
        for (Variant v : {Variant::jbtva, Variant::mgsbtva, Variant::fixed_gs_sr}) {
            SolverConfig cfg;
            cfg.variant = v;
            cfg.seed = 5;
            k::use_backend(k::Backend::scalar);
            const auto ref = run_solver(sys, cfg);
            k::use_backend(backend);
            const auto got = run_solver(sys, cfg);
            CHECK(ref.converged);
            CHECK(got.converged);
            // Rounding may flip a near-tie in adaptation; allow a one-generation shift.
            CHECK(std::llabs(static_cast<long long>(ref.generations) - static_cast<long long>(got.generations)) <= 1);
            CHECK(std::abs(std::log10(ref.trace[5].residual) - std::log10(got.trace[5].residual)) < 1e-6);
        }
    }
}
