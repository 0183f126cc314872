#pragma once
// Seeded repetitions of solver runs over problems x variants, with CSV output
// and residual-trace charts.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsr/evolution.hpp"
#include "hybridsr/problems.hpp"

namespace hybridsr {

inline constexpr std::string_view kCsvHeader =
    "problem,variant,seed,generations,elapsed_ms,final_residual,converged,problem_hash";

struct BenchPlan {
    std::vector<ProblemSpec> problems;
    std::vector<Variant> variants;
    std::size_t repetitions = 10;
    std::uint64_t base_seed = 0;
    SolverConfig solver_defaults;     // variant and seed are overwritten per run
    std::size_t timing_repeats = 1;   // report the fastest of this many identical runs
    std::size_t threads = 1;

    void validate() const;
};

struct BenchRow {
    std::string problem_id;
    Variant variant = Variant::jbtva;
    std::uint64_t seed = 0;
    std::uint64_t generations = 0;
    double elapsed_ms = 0.0;
    double final_residual = 0.0;
    bool converged = false;
    std::uint64_t problem_hash = 0;

    bool operator==(const BenchRow&) const = default;
};

struct BenchResult {
    std::vector<BenchRow> rows;                  // ordered by (problem, variant, repetition)
    std::vector<std::vector<TracePoint>> traces; // parallel to rows
};

/// FNV-1a over the bytes of A (row-major) followed by b.
std::uint64_t problem_hash(const LinearSystem& sys) noexcept;

/// FNV-1a of the canonical spec text; identifies a problem independent of its
/// position in a plan.
std::uint64_t problem_key(const ProblemSpec& spec);

/// Seed of the (problem, repetition) instance shared by every variant.
std::uint64_t instance_seed(std::uint64_t base_seed, const ProblemSpec& spec, std::size_t repetition);

/// base_seed ^ mix(problem_key, variant, repetition), mix being chained SplitMix64.
std::uint64_t run_seed(std::uint64_t base_seed, const ProblemSpec& spec, Variant variant, std::size_t repetition);

/// Generates each (problem, repetition) instance once and runs every variant on
/// it. Non-converged runs still produce rows.
BenchResult run_benchmark(const BenchPlan& plan);

/// Throws std::runtime_error when the stream reports a write failure.
void write_csv(std::span<const BenchRow> rows, std::ostream& out);

/// Inverse of write_csv. Throws ParseError on a wrong header or malformed row.
std::vector<BenchRow> parse_csv(std::string_view text);

struct BenchSummary {
    std::string problem_id;
    Variant variant = Variant::jbtva;
    std::size_t runs = 0;
    std::size_t converged_runs = 0;
    double mean_generations = 0.0;
    double mean_elapsed_ms = 0.0;
    double mean_ms_per_generation = 0.0;  // over runs with at least one generation
};

/// Arithmetic means per (problem, variant), in order of first appearance.
std::vector<BenchSummary> summarize(std::span<const BenchRow> rows);

/// Plan file: problem keys (id as a comma list, n, seed, diag/offdiag/rhs for
/// id=custom) plus variants, repetitions, base_seed, threshold,
/// max_generations, population, timing_repeats, threads.
BenchPlan parse_bench_plan(std::string_view text);

struct LabeledTrace {
    std::string label;
    std::vector<TracePoint> points;
};

/// Standalone SVG 1.1 line chart of log10(residual) against generation; one
/// polyline per trace and a legend when any trace is labeled. Residuals at or
/// below 1e-16 are drawn at 1e-16. Throws InvalidArgument on an empty input.
void emit_trace_svg(std::span<const LabeledTrace> traces, std::ostream& out);

}  // namespace hybridsr
