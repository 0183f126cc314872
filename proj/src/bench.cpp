#include "hybridsr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>

#include "hybridsr/errors.hpp"
#include "hybridsr/text.hpp"

namespace hybridsr {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) noexcept {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
    return splitmix64(a ^ splitmix64(b ^ splitmix64(c)));
}

std::uint64_t variant_code(Variant v) noexcept { return static_cast<std::uint64_t>(v) + 1; }

struct RunOutput {
    BenchRow row;
    std::vector<TracePoint> trace;
};

RunOutput execute(const LinearSystem& sys, std::uint64_t hash, const BenchPlan& plan, const ProblemSpec& spec,
                  Variant variant, std::size_t rep) {
    SolverConfig cfg = plan.solver_defaults;
    cfg.variant = variant;
    cfg.seed = run_seed(plan.base_seed, spec, variant, rep);

    RunResult best = run_solver(sys, cfg);
    for (std::size_t k = 1; k < plan.timing_repeats; ++k) {
        RunResult again = run_solver(sys, cfg);
        if (again.elapsed_ms < best.elapsed_ms) best = std::move(again);
    }

    RunOutput out;
    out.row = {std::string(problem_id_name(spec.id)), variant,        cfg.seed,       best.generations,
               best.elapsed_ms,                       best.final_residual, best.converged, hash};
    out.trace = std::move(best.trace);
    return out;
}

}  // namespace

void BenchPlan::validate() const {
    if (problems.empty()) throw InvalidArgument("bench plan needs at least one problem");
    if (variants.empty()) throw InvalidArgument("bench plan needs at least one variant");
    if (repetitions == 0) throw InvalidArgument("repetitions must be at least 1");
    if (timing_repeats == 0) throw InvalidArgument("timing_repeats must be at least 1");
    for (const auto& p : problems) hybridsr::validate(p);
    SolverConfig probe = solver_defaults;
    for (Variant v : variants) {
        probe.variant = v;
        probe.validate();
    }
}

std::uint64_t problem_hash(const LinearSystem& sys) noexcept {
    const auto a = sys.a().entries();
    std::uint64_t h = fnv1a(kFnvOffset, a.data(), a.size_bytes());
    return fnv1a(h, sys.b().data(), sys.b().size() * sizeof(double));
}

std::uint64_t problem_key(const ProblemSpec& spec) {
    const std::string canonical = format_problem_spec(spec);
    return fnv1a(kFnvOffset, canonical.data(), canonical.size());
}

std::uint64_t instance_seed(std::uint64_t base_seed, const ProblemSpec& spec, std::size_t repetition) {
    return base_seed ^ mix(problem_key(spec), 0, repetition);
}

std::uint64_t run_seed(std::uint64_t base_seed, const ProblemSpec& spec, Variant variant, std::size_t repetition) {
    return base_seed ^ mix(problem_key(spec), variant_code(variant), repetition);
}

BenchResult run_benchmark(const BenchPlan& plan) {
    plan.validate();
    const std::size_t n_var = plan.variants.size();
    const std::size_t n_rep = plan.repetitions;
    const std::size_t jobs = plan.problems.size() * n_rep;

    std::vector<RunOutput> outputs(jobs * n_var);
    auto run_job = [&](std::size_t job) {
        const std::size_t p = job / n_rep;
        const std::size_t rep = job % n_rep;
        const ProblemSpec& spec = plan.problems[p];
        ProblemSpec instance = spec;
        instance.seed = instance_seed(plan.base_seed, spec, rep);
        const LinearSystem sys = generate_problem(instance);
        const std::uint64_t hash = problem_hash(sys);
        for (std::size_t v = 0; v < n_var; ++v) {
            outputs[(p * n_var + v) * n_rep + rep] = execute(sys, hash, plan, spec, plan.variants[v], rep);
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(plan.threads, 1, jobs);
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) run_job(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
                        try {
                            run_job(j);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    BenchResult result;
    result.rows.reserve(outputs.size());
    result.traces.reserve(outputs.size());
    for (auto& o : outputs) {
        result.rows.push_back(std::move(o.row));
        result.traces.push_back(std::move(o.trace));
    }
    return result;
}

std::vector<BenchSummary> summarize(std::span<const BenchRow> rows) {
    std::vector<BenchSummary> out;
    std::map<std::pair<std::string, Variant>, std::size_t> index;
    std::vector<double> gens, ms, per_gen;
    std::vector<std::size_t> per_gen_runs;
    for (const auto& r : rows) {
        auto [it, inserted] = index.try_emplace({r.problem_id, r.variant}, out.size());
        if (inserted) {
            out.push_back({r.problem_id, r.variant});
            gens.push_back(0.0);
            ms.push_back(0.0);
            per_gen.push_back(0.0);
            per_gen_runs.push_back(0);
        }
        const std::size_t k = it->second;
        ++out[k].runs;
        if (r.converged) ++out[k].converged_runs;
        gens[k] += static_cast<double>(r.generations);
        ms[k] += r.elapsed_ms;
        if (r.generations > 0) {
            per_gen[k] += r.elapsed_ms / static_cast<double>(r.generations);
            ++per_gen_runs[k];
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto runs = static_cast<double>(out[k].runs);
        out[k].mean_generations = gens[k] / runs;
        out[k].mean_elapsed_ms = ms[k] / runs;
        out[k].mean_ms_per_generation = per_gen_runs[k] ? per_gen[k] / static_cast<double>(per_gen_runs[k]) : 0.0;
    }
    return out;
}

BenchPlan parse_bench_plan(std::string_view input) {
    const auto entries = text::parse_key_values(input);

    BenchPlan plan;
    std::vector<ProblemId> ids;
    std::size_t ids_line = 0;
    std::size_t n = 200;
    std::uint64_t spec_seed = 0;
    std::optional<EntryRule> diag, offdiag, rhs;
    std::size_t first_rule_line = 0;
    bool have_variants = false;

    auto need_u64 = [](const text::KeyValue& kv) {
        const auto v = text::parse_u64(kv.value);
        if (!v) throw ParseError(kv.line, kv.key + " must be an unsigned integer, got '" + kv.value + "'");
        return *v;
    };
    auto need_positive = [&](const text::KeyValue& kv) {
        const auto v = need_u64(kv);
        if (v == 0) throw ParseError(kv.line, kv.key + " must be positive");
        return v;
    };

    for (const auto& kv : entries) {
        if (kv.key == "id") {
            ids_line = kv.line;
            for (auto part : text::split(kv.value, ',')) {
                const auto id = parse_problem_id(text::trim(part));
                if (!id) throw ParseError(kv.line, "unknown problem id '" + std::string(text::trim(part)) + "'");
                ids.push_back(*id);
            }
        } else if (kv.key == "n") {
            n = static_cast<std::size_t>(need_positive(kv));
        } else if (kv.key == "seed") {
            spec_seed = need_u64(kv);
        } else if (kv.key == "diag" || kv.key == "offdiag" || kv.key == "rhs") {
            const RuleRole role = kv.key == "diag"      ? RuleRole::diag
                                  : kv.key == "offdiag" ? RuleRole::offdiag
                                                        : RuleRole::rhs;
            (role == RuleRole::diag ? diag : role == RuleRole::offdiag ? offdiag : rhs) =
                parse_rule(kv.value, role, kv.line);
            if (first_rule_line == 0) first_rule_line = kv.line;
        } else if (kv.key == "variants") {
            have_variants = true;
            for (auto part : text::split(kv.value, ',')) {
                const auto v = parse_variant(text::trim(part));
                if (!v) throw ParseError(kv.line, "unknown variant '" + std::string(text::trim(part)) + "'");
                plan.variants.push_back(*v);
            }
        } else if (kv.key == "repetitions") {
            plan.repetitions = static_cast<std::size_t>(need_positive(kv));
        } else if (kv.key == "base_seed") {
            plan.base_seed = need_u64(kv);
        } else if (kv.key == "threshold") {
            const auto v = text::parse_double(kv.value);
            if (!v || !(*v > 0.0)) throw ParseError(kv.line, "threshold must be a positive real");
            plan.solver_defaults.threshold = *v;
        } else if (kv.key == "max_generations") {
            plan.solver_defaults.max_generations = need_u64(kv);
        } else if (kv.key == "population") {
            plan.solver_defaults.population_size = static_cast<std::size_t>(need_positive(kv));
        } else if (kv.key == "timing_repeats") {
            plan.timing_repeats = static_cast<std::size_t>(need_positive(kv));
        } else if (kv.key == "threads") {
            plan.threads = static_cast<std::size_t>(need_positive(kv));
        } else {
            throw ParseError(kv.line, "unknown key '" + kv.key + "'");
        }
    }

    if (ids.empty()) throw ParseError(0, "missing required key 'id'");
    if (!have_variants) throw ParseError(0, "missing required key 'variants'");

    const bool wants_custom = std::find(ids.begin(), ids.end(), ProblemId::custom) != ids.end();
    if (!wants_custom && first_rule_line != 0) {
        throw ParseError(first_rule_line, "rule keys are only allowed when id lists custom");
    }
    for (ProblemId id : ids) {
        if (id == ProblemId::custom) {
            if (!diag || !offdiag || !rhs) {
                throw ParseError(ids_line, "id=custom needs diag, offdiag and rhs rules");
            }
            plan.problems.push_back({ProblemId::custom, n, *diag, *offdiag, *rhs, spec_seed});
        } else {
            plan.problems.push_back(builtin_problem(id, n, spec_seed));
        }
    }

    try {
        plan.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(0, e.what());
    }
    return plan;
}

}  // namespace hybridsr
