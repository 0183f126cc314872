#pragma once
// Hybrid evolutionary solvers that self-adapt the relaxation factor.
//
// A population of N candidate solutions is evolved by
//   [recombination] -> mutation (one SR sweep per slot) -> adaptation of the
//   slot relaxation factors -> selection/reproduction
// until the best residual drops below the threshold. The "modified" variants
// (MJBTVA, MGSBTVA) run the same loop without recombination.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hybridsr/iteration.hpp"
#include "hybridsr/linalg.hpp"
#include "hybridsr/rng.hpp"

namespace hybridsr {

enum class Variant { jbtva, gsbtva, mjbtva, mgsbtva, fixed_jacobi_sr, fixed_gs_sr };

inline constexpr Variant kAllVariants[] = {Variant::jbtva,  Variant::gsbtva,          Variant::mjbtva,
                                           Variant::mgsbtva, Variant::fixed_jacobi_sr, Variant::fixed_gs_sr};

/// Upper-case identifier used on the command line and in CSV output, e.g. "MJBTVA".
std::string_view variant_name(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;
Method variant_method(Variant v) noexcept;
bool variant_recombines(Variant v) noexcept;
bool variant_is_fixed(Variant v) noexcept;

/// Adapted relaxation factors are kept this far inside (omega_lo, omega_hi).
inline constexpr double kOmegaMargin = 1e-6;

struct AdaptiveParams {
    double e_x = 0.125;
    double e_y = 0.03125;
    double lambda = 50.0;
    double omega_lo = 0.0;
    double omega_hi = 2.0;

    void validate() const;
};

struct SolverConfig {
    Variant variant = Variant::jbtva;
    std::size_t population_size = 2;
    double threshold = 1e-7;
    std::uint64_t max_generations = 10000;
    double divergence_bound = 1e12;
    std::uint64_t seed = 0;
    AdaptiveParams adaptive;
    double fixed_omega = 1.0;  // FIXED_* variants only
    double init_lo = -30.0;
    double init_hi = 30.0;

    /// Throws InvalidArgument describing the first violated constraint.
    void validate() const;
};

struct Individual {
    Vector state;
    std::optional<double> fitness;  // residual L2 norm; empty until evaluated
};

/// The relaxation factor lives in the slot, not in the individual, and stays
/// put when selection overwrites the slot's individual.
struct Slot {
    Individual individual;
    double omega = 1.0;
};

struct Population {
    std::vector<Slot> slots;
    std::uint64_t generation = 0;

    std::size_t size() const noexcept { return slots.size(); }
    /// Lowest-index slot with the smallest fitness; unevaluated or NaN counts as +inf.
    std::size_t best_index() const noexcept;
    double best_fitness() const noexcept;
};

/// Row-stochastic N x N matrix: nonnegative entries, every row sums to 1.
class StochasticMatrix {
public:
    /// Validates nonnegativity and unit row sums (tolerance 1e-12).
    StochasticMatrix(std::size_t n, std::vector<double> entries);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    static StochasticMatrix identity(std::size_t n);

private:
    std::size_t n_;
    std::vector<double> data_;
};

struct TracePoint {
    std::uint64_t generation = 0;
    double residual = 0.0;

    bool operator==(const TracePoint&) const = default;
};

struct RunResult {
    std::uint64_t generations = 0;
    double elapsed_ms = 0.0;
    double final_residual = 0.0;
    bool converged = false;
    bool diverged = false;
    std::vector<TracePoint> trace;  // best residual after each generation, starting at 0
    std::vector<double> final_omegas;
    Vector solution;                 // best state at termination
    std::uint64_t recombinations = 0;
};

/// Midpoints of N equal cells of (omega_lo, omega_hi).
std::vector<double> init_relaxation_factors(std::size_t n_pop, const AdaptiveParams& params);

/// States drawn uniformly from (init_lo, init_hi), factors from
/// init_relaxation_factors, fitness evaluated, generation 0.
Population init_population(const LinearSystem& sys, const SolverConfig& cfg, Rng& rng);

/// T(t) = lambda * ln(1 + 1/(t + lambda)). Decreases strictly towards 0.
double basic_time_variant(std::uint64_t t, double lambda);

/// Step sizes of one adaptation: `loser` is signed, `winner` is nonnegative.
struct AdaptationStep {
    double loser = 0.0;
    double winner = 0.0;
};

/// loser = e_x * g_loser * T(t), winner = e_y * |g_winner| * T(t).
AdaptationStep adaptation_step(std::uint64_t t, const AdaptiveParams& params, double g_loser, double g_winner);

/// Deterministic core of the pairwise update. The slot with the larger error
/// (the loser) moves to (0.5 + step.loser) * (w_x + w_y); the winner moves a
/// fraction step.winner of the way to the interval end on its side of the
/// loser (the upper end when the factors are equal). Equal errors leave both
/// unchanged. NaN errors rank as +inf. Results are clamped to
/// [omega_lo + kOmegaMargin, omega_hi - kOmegaMargin].
std::pair<double, double> apply_adaptation(double omega_x, double omega_y, double err_x, double err_y,
                                           AdaptationStep step, const AdaptiveParams& params);

/// Draws two N(0, 0.25) variates (always, in this order: loser, winner) and
/// applies the update at generation t.
std::pair<double, double> adapt_pair(double omega_x, double omega_y, double err_x, double err_y, std::uint64_t t,
                                     const AdaptiveParams& params, Rng& rng);

/// Uniform (0,1) entries, rows normalized to sum 1.
StochasticMatrix make_stochastic_matrix(std::size_t n_pop, Rng& rng);

/// offspring_i = sum_j r_ij * parent_j. Slot factors and generation carry over;
/// fitness is cleared.
Population recombine(const Population& pop, const StochasticMatrix& r);

/// One SR step per slot with that slot's factor, then re-evaluation.
Population mutate_and_evaluate(Population pop, const LinearSystem& sys, Method method);

/// Adapts slot pairs (0,1), (2,3), ... using pop.generation as t.
void adapt_population(Population& pop, const AdaptiveParams& params, Rng& rng);

/// Keeps the N/2 fittest individuals (ties to the lower slot index) and copies
/// survivor k into slots 2k and 2k+1. Factors stay in their slots.
Population select_and_reproduce(Population pop);

/// Called with the population after each completed generation.
using GenerationObserver = std::function<void(const Population&)>;

/// Runs one solve. Invalid configs throw; divergence and the generation cap
/// are reported through the result.
RunResult run_solver(const LinearSystem& sys, const SolverConfig& cfg, const GenerationObserver& observer = {});

}  // namespace hybridsr
