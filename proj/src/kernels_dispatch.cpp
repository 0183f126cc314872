#include <atomic>
#include <stdexcept>
#include <string>

#include "hybridsr/kernels.hpp"

namespace hybridsr::kernels {

namespace {

constexpr KernelTable kScalarTable{Backend::scalar, &scalar::dot, &scalar::axpy};
#if defined(HYBRIDSR_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Backend::avx2, &avx2::dot, &avx2::axpy};
#endif
#if defined(HYBRIDSR_HAVE_NEON)
constexpr KernelTable kNeonTable{Backend::neon, &neon::dot, &neon::axpy};
#endif

bool cpu_has_avx2_fma() noexcept {
#if defined(HYBRIDSR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() noexcept {
    return &table(preferred_backend());
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> ptr{initial_table()};
    return ptr;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

bool available(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: {
            static const bool ok = cpu_has_avx2_fma();
            return ok;
        }
        case Backend::neon:
#if defined(HYBRIDSR_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Backend b) {
    if (!available(b)) {
        throw std::invalid_argument("kernel backend '" + std::string(backend_name(b)) +
                                    "' is not available on this machine");
    }
    switch (b) {
#if defined(HYBRIDSR_HAVE_AVX2)
        case Backend::avx2: return kAvx2Table;
#endif
#if defined(HYBRIDSR_HAVE_NEON)
        case Backend::neon: return kNeonTable;
#endif
        default: return kScalarTable;
    }
}

Backend preferred_backend() noexcept {
    if (available(Backend::avx2)) return Backend::avx2;
    if (available(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

const KernelTable& active() noexcept {
    return *current().load(std::memory_order_acquire);
}

void use_backend(Backend b) {
    current().store(&table(b), std::memory_order_release);
}

}  // namespace hybridsr::kernels
