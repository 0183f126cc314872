#pragma once
// Seedable random source with a fixed, library-independent algorithm.
//
// Bits come from std::mt19937_64 (fully specified by the standard). The
// conversions to uniform and Gaussian reals are implemented here rather than
// through std::*_distribution, whose algorithms differ between standard
// libraries, so a seed reproduces the same run everywhere.

#include <cmath>
#include <cstdint>
#include <random>

namespace hybridsr {

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Named sub-streams so one user seed can drive several independent consumers.
enum class Stream : std::uint64_t { problem = 1, solver = 2 };

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    Rng(std::uint64_t seed, Stream stream)
        : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)))) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1): (k + 0.5) / 2^53 for a 53-bit k.
    double uniform01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform on the open interval (lo, hi); redraws the rare rounding onto an endpoint.
    double uniform(double lo, double hi) {
        for (;;) {
            const double v = lo + (hi - lo) * uniform01();
            if (v > lo && v < hi) return v;
        }
    }

    /// Gaussian via the Marsaglia polar method; the second variate is discarded.
    double gaussian(double mean, double stddev) {
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return mean + stddev * u * std::sqrt(-2.0 * std::log(s) / s);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hybridsr
