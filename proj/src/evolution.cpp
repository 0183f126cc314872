#include "hybridsr/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "hybridsr/errors.hpp"
#include "hybridsr/kernels.hpp"

namespace hybridsr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// NaN and unset fitness rank last.
double rank_value(const std::optional<double>& f) noexcept {
    if (!f || std::isnan(*f)) return kInf;
    return *f;
}

double rank_value(double e) noexcept { return std::isnan(e) ? kInf : e; }

double clamp_omega(double w, const AdaptiveParams& p) noexcept {
    return std::clamp(w, p.omega_lo + kOmegaMargin, p.omega_hi - kOmegaMargin);
}

// Returns (new loser factor, new winner factor).
std::pair<double, double> move_pair(double loser, double winner, AdaptationStep step, const AdaptiveParams& p) {
    const double moved_loser = (0.5 + step.loser) * (loser + winner);
    const double bound = winner >= loser ? p.omega_hi : p.omega_lo;
    const double moved_winner = winner + step.winner * (bound - winner);
    return {clamp_omega(moved_loser, p), clamp_omega(moved_winner, p)};
}

bool stop_check(double best, const SolverConfig& cfg, RunResult& out) {
    if (best < cfg.threshold) {
        out.converged = true;
        return true;
    }
    if (!(best <= cfg.divergence_bound)) {  // also catches NaN
        out.diverged = true;
        return true;
    }
    return false;
}

RunResult run_fixed(const LinearSystem& sys, const SolverConfig& cfg) {
    const Method method = variant_method(cfg.variant);
    RunResult out;
    Vector x(sys.size(), 0.0);
    Vector scratch(sys.size());

    const auto start = std::chrono::steady_clock::now();
    double res = residual_norm(sys, x);
    out.trace.push_back({0, res});
    std::uint64_t t = 0;
    while (!stop_check(res, cfg, out) && t < cfg.max_generations) {
        if (method == Method::jacobi) {
            jacobi_sr_step(sys, x, cfg.fixed_omega, scratch);
            x.swap(scratch);
        } else {
            gauss_seidel_sr_step_inplace(sys, x, cfg.fixed_omega);
        }
        res = residual_norm(sys, x);
        ++t;
        out.trace.push_back({t, res});
    }
    out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    out.generations = t;
    out.final_residual = res;
    out.final_omegas = {cfg.fixed_omega};
    out.solution = std::move(x);
    return out;
}

}  // namespace

std::string_view variant_name(Variant v) noexcept {
    switch (v) {
        case Variant::jbtva: return "JBTVA";
        case Variant::gsbtva: return "GSBTVA";
        case Variant::mjbtva: return "MJBTVA";
        case Variant::mgsbtva: return "MGSBTVA";
        case Variant::fixed_jacobi_sr: return "FIXED_JACOBI_SR";
        case Variant::fixed_gs_sr: return "FIXED_GS_SR";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
    for (Variant v : kAllVariants) {
        if (variant_name(v) == name) return v;
    }
    return std::nullopt;
}

Method variant_method(Variant v) noexcept {
    switch (v) {
        case Variant::jbtva:
        case Variant::mjbtva:
        case Variant::fixed_jacobi_sr: return Method::jacobi;
        default: return Method::gauss_seidel;
    }
}

bool variant_recombines(Variant v) noexcept { return v == Variant::jbtva || v == Variant::gsbtva; }

bool variant_is_fixed(Variant v) noexcept {
    return v == Variant::fixed_jacobi_sr || v == Variant::fixed_gs_sr;
}

void AdaptiveParams::validate() const {
    if (!(e_x > 0.0) || !(e_y > 0.0)) throw InvalidArgument("adaptation bounds e_x and e_y must be positive");
    if (!(lambda > 10.0)) throw InvalidArgument("lambda must exceed 10");
    if (!(omega_lo < omega_hi) || omega_hi - omega_lo <= 2.0 * kOmegaMargin) {
        throw InvalidArgument("relaxation interval must satisfy omega_lo < omega_hi");
    }
}

void SolverConfig::validate() const {
    adaptive.validate();
    if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
    if (!(divergence_bound > 0.0)) throw InvalidArgument("divergence bound must be positive");
    if (!(init_lo < init_hi)) throw InvalidArgument("initialization interval must satisfy init_lo < init_hi");
    if (variant_is_fixed(variant)) {
        if (!(fixed_omega > adaptive.omega_lo && fixed_omega < adaptive.omega_hi)) {
            throw InvalidArgument("fixed relaxation factor must lie inside (omega_lo, omega_hi)");
        }
    } else if (population_size < 2 || population_size % 2 != 0) {
        throw InvalidArgument("population size must be even and at least 2, got " +
                              std::to_string(population_size));
    }
}

std::size_t Population::best_index() const noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < slots.size(); ++i) {
        if (rank_value(slots[i].individual.fitness) < rank_value(slots[best].individual.fitness)) best = i;
    }
    return best;
}

double Population::best_fitness() const noexcept {
    if (slots.empty()) return kInf;
    const auto& f = slots[best_index()].individual.fitness;
    return f ? *f : kInf;
}

StochasticMatrix::StochasticMatrix(std::size_t n, std::vector<double> entries) : n_(n), data_(std::move(entries)) {
    if (data_.size() != n * n) throw DimensionError("stochastic matrix needs n*n entries");
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = data_[i * n + j];
            if (!(v >= 0.0)) throw InvalidArgument("stochastic matrix entries must be nonnegative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw InvalidArgument("stochastic matrix row " + std::to_string(i + 1) + " does not sum to 1");
        }
    }
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return {n, std::move(e)};
}

std::vector<double> init_relaxation_factors(std::size_t n_pop, const AdaptiveParams& params) {
    const double d = (params.omega_hi - params.omega_lo) / static_cast<double>(n_pop);
    std::vector<double> omegas(n_pop);
    for (std::size_t i = 0; i < n_pop; ++i) {
        omegas[i] = params.omega_lo + d / 2.0 + static_cast<double>(i) * d;
    }
    return omegas;
}

Population init_population(const LinearSystem& sys, const SolverConfig& cfg, Rng& rng) {
    const auto omegas = init_relaxation_factors(cfg.population_size, cfg.adaptive);
    Population pop;
    pop.slots.reserve(cfg.population_size);
    for (std::size_t k = 0; k < cfg.population_size; ++k) {
        Vector x(sys.size());
        for (double& c : x) c = rng.uniform(cfg.init_lo, cfg.init_hi);
        const double f = residual_norm(sys, x);
        pop.slots.push_back({{std::move(x), f}, omegas[k]});
    }
    return pop;
}

double basic_time_variant(std::uint64_t t, double lambda) {
    return lambda * std::log1p(1.0 / (static_cast<double>(t) + lambda));
}

AdaptationStep adaptation_step(std::uint64_t t, const AdaptiveParams& params, double g_loser, double g_winner) {
    const double tw = basic_time_variant(t, params.lambda);
    return {params.e_x * g_loser * tw, params.e_y * std::abs(g_winner) * tw};
}

std::pair<double, double> apply_adaptation(double omega_x, double omega_y, double err_x, double err_y,
                                           AdaptationStep step, const AdaptiveParams& params) {
    const double ex = rank_value(err_x);
    const double ey = rank_value(err_y);
    if (ex > ey) return move_pair(omega_x, omega_y, step, params);
    if (ex < ey) {
        auto [new_y, new_x] = move_pair(omega_y, omega_x, step, params);
        return {new_x, new_y};
    }
    return {omega_x, omega_y};
}

std::pair<double, double> adapt_pair(double omega_x, double omega_y, double err_x, double err_y, std::uint64_t t,
                                     const AdaptiveParams& params, Rng& rng) {
    const double g_loser = rng.gaussian(0.0, 0.25);
    const double g_winner = rng.gaussian(0.0, 0.25);
    return apply_adaptation(omega_x, omega_y, err_x, err_y, adaptation_step(t, params, g_loser, g_winner), params);
}

StochasticMatrix make_stochastic_matrix(std::size_t n_pop, Rng& rng) {
    std::vector<double> e(n_pop * n_pop);
    for (std::size_t i = 0; i < n_pop; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n_pop; ++j) sum += (e[i * n_pop + j] = rng.uniform01());
        for (std::size_t j = 0; j < n_pop; ++j) e[i * n_pop + j] /= sum;
    }
    return {n_pop, std::move(e)};
}

Population recombine(const Population& pop, const StochasticMatrix& r) {
    const std::size_t n_pop = pop.size();
    if (r.size() != n_pop) throw DimensionError("stochastic matrix order differs from population size");
    const std::size_t dim = n_pop == 0 ? 0 : pop.slots[0].individual.state.size();
    const auto& k = kernels::active();

    Population out;
    out.generation = pop.generation;
    out.slots.reserve(n_pop);
    for (std::size_t i = 0; i < n_pop; ++i) {
        Vector child(dim, 0.0);
        for (std::size_t j = 0; j < n_pop; ++j) {
            k.axpy(r(i, j), pop.slots[j].individual.state.data(), child.data(), dim);
        }
        out.slots.push_back({{std::move(child), std::nullopt}, pop.slots[i].omega});
    }
    return out;
}

Population mutate_and_evaluate(Population pop, const LinearSystem& sys, Method method) {
    Vector scratch(sys.size());
    for (auto& slot : pop.slots) {
        auto& x = slot.individual.state;
        if (method == Method::jacobi) {
            jacobi_sr_step(sys, x, slot.omega, scratch);
            x.swap(scratch);
        } else {
            gauss_seidel_sr_step_inplace(sys, x, slot.omega);
        }
        slot.individual.fitness = residual_norm(sys, x);
    }
    return pop;
}

void adapt_population(Population& pop, const AdaptiveParams& params, Rng& rng) {
    for (std::size_t i = 0; i + 1 < pop.size(); i += 2) {
        auto& x = pop.slots[i];
        auto& y = pop.slots[i + 1];
        std::tie(x.omega, y.omega) = adapt_pair(x.omega, y.omega, rank_value(x.individual.fitness),
                                                rank_value(y.individual.fitness), pop.generation, params, rng);
    }
}

Population select_and_reproduce(Population pop) {
    const std::size_t n_pop = pop.size();
    std::vector<std::size_t> order(n_pop);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rank_value(pop.slots[a].individual.fitness) < rank_value(pop.slots[b].individual.fitness);
    });

    const std::size_t keep = n_pop / 2;
    std::vector<Individual> survivors;
    survivors.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) survivors.push_back(std::move(pop.slots[order[k]].individual));

    for (std::size_t k = 0; k < keep; ++k) {
        pop.slots[2 * k].individual = survivors[k];
        pop.slots[2 * k + 1].individual = std::move(survivors[k]);
    }
    return pop;
}

RunResult run_solver(const LinearSystem& sys, const SolverConfig& cfg, const GenerationObserver& observer) {
    cfg.validate();
    if (variant_is_fixed(cfg.variant)) return run_fixed(sys, cfg);

    const Method method = variant_method(cfg.variant);
    const bool recombining = variant_recombines(cfg.variant);
    Rng rng(cfg.seed, Stream::solver);
    Population pop = init_population(sys, cfg, rng);

    RunResult out;
    const auto start = std::chrono::steady_clock::now();
    double best = pop.best_fitness();
    out.trace.push_back({0, best});
    while (!stop_check(best, cfg, out) && pop.generation < cfg.max_generations) {
        if (recombining) {
            pop = recombine(pop, make_stochastic_matrix(pop.size(), rng));
            ++out.recombinations;
        }
        pop = mutate_and_evaluate(std::move(pop), sys, method);
        adapt_population(pop, cfg.adaptive, rng);
        pop = select_and_reproduce(std::move(pop));
        ++pop.generation;
        best = pop.best_fitness();
        out.trace.push_back({pop.generation, best});
        if (observer) observer(pop);
    }
    out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    out.generations = pop.generation;
    out.final_residual = best;
    out.final_omegas.reserve(pop.size());
    for (const auto& s : pop.slots) out.final_omegas.push_back(s.omega);
    out.solution = std::move(pop.slots[pop.best_index()].individual.state);
    return out;
}

}  // namespace hybridsr
