#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "hybridsr/bench.hpp"
#include "hybridsr/errors.hpp"
#include "hybridsr/evolution.hpp"
#include "hybridsr/problems.hpp"
#include "hybridsr/text.hpp"

namespace hybridsr::cli {

namespace {

namespace fs = std::filesystem;

// Failure that maps directly onto an exit code.
struct CliFailure {
    ExitCode code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure{kIoError, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw CliFailure{kIoError, "error while reading '" + path + "'"};
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw CliFailure{kIoError, "cannot open '" + path + "' for writing"};
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) {
        std::error_code ec;
        fs::remove(path, ec);
        throw CliFailure{kIoError, "failed to write '" + path + "'"};
    }
}

template <class Fn>
auto parse_or_usage(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw CliFailure{kUsageError, e.what()};
    } catch (const InvalidArgument& e) {
        throw CliFailure{kUsageError, e.what()};
    }
}

// `Pk` names a built-in family; anything else is a spec file path.
ProblemSpec resolve_problem(const std::string& arg, std::size_t n, std::uint64_t seed) {
    if (const auto id = parse_problem_id(arg); id && *id != ProblemId::custom) {
        return builtin_problem(*id, n, seed);
    }
    const std::string text = read_file(arg);
    return parse_or_usage([&] { return parse_problem_spec(text); });
}

Variant resolve_variant(const std::string& name) {
    const auto v = parse_variant(name);
    if (!v) throw CliFailure{kUsageError, "unknown variant '" + name + "'"};
    return *v;
}

struct SolveOptions {
    std::string problem;
    std::string variant = "JBTVA";
    std::uint64_t seed = 0;
    std::size_t n = 200;
    double threshold = 1e-7;
    std::uint64_t max_gens = 10000;
    std::size_t population = 2;
    double omega = 1.0;
    std::string trace;
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
    const ProblemSpec spec = resolve_problem(o.problem, o.n, o.seed);
    const LinearSystem sys = parse_or_usage([&] { return generate_problem(spec); });

    SolverConfig cfg;
    cfg.variant = resolve_variant(o.variant);
    cfg.seed = o.seed;
    cfg.threshold = o.threshold;
    cfg.max_generations = o.max_gens;
    cfg.population_size = o.population;
    cfg.fixed_omega = o.omega;
    const RunResult r = parse_or_usage([&] { return run_solver(sys, cfg); });

    if (!o.trace.empty()) {
        std::ostringstream svg;
        const LabeledTrace t{std::string(variant_name(cfg.variant)), r.trace};
        emit_trace_svg({&t, 1}, svg);
        write_file(o.trace, svg.str());
    }

    out << "generations=" << r.generations << " elapsed_ms=" << text::format_double(r.elapsed_ms)
        << " final_residual=" << text::format_double(r.final_residual) << '\n';
    if (r.converged) return kSuccess;
    err << (r.diverged ? "not converged: residual diverged" : "not converged: generation cap reached")
        << " after " << r.generations << " generations\n";
    return kNotConverged;
}

struct BenchOptions {
    std::string plan;
    std::string out;
    std::string traces;
    std::size_t threads = 0;
};

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    const std::string text = read_file(o.plan);
    BenchPlan plan = parse_or_usage([&] { return parse_bench_plan(text); });
    if (o.threads > 0) plan.threads = o.threads;
    const BenchResult result = parse_or_usage([&] { return run_benchmark(plan); });

    std::ostringstream csv;
    write_csv(result.rows, csv);
    write_file(o.out, csv.str());

    if (!o.traces.empty()) {
        std::error_code ec;
        fs::create_directories(o.traces, ec);
        if (ec) throw CliFailure{kIoError, "cannot create trace directory '" + o.traces + "'"};
        // One chart per (problem, repetition) with a curve per variant.
        const std::size_t n_var = plan.variants.size();
        const std::size_t n_rep = plan.repetitions;
        for (std::size_t p = 0; p < plan.problems.size(); ++p) {
            for (std::size_t rep = 0; rep < n_rep; ++rep) {
                std::vector<LabeledTrace> traces;
                for (std::size_t v = 0; v < n_var; ++v) {
                    const std::size_t idx = (p * n_var + v) * n_rep + rep;
                    traces.push_back({std::string(variant_name(plan.variants[v])), result.traces[idx]});
                }
                std::ostringstream svg;
                emit_trace_svg(traces, svg);
                const std::string name = std::string(problem_id_name(plan.problems[p].id)) + "_" +
                                         std::to_string(p + 1) + "_rep" + std::to_string(rep + 1) + ".svg";
                write_file((fs::path(o.traces) / name).string(), svg.str());
            }
        }
    }

    bool all_converged = true;
    for (const auto& s : summarize(result.rows)) {
        out << s.problem_id << ' ' << variant_name(s.variant) << " runs=" << s.runs
            << " converged=" << s.converged_runs << " mean_generations=" << text::format_double(s.mean_generations)
            << " mean_elapsed_ms=" << text::format_double(s.mean_elapsed_ms) << '\n';
        all_converged = all_converged && s.converged_runs == s.runs;
    }
    if (!all_converged) {
        err << "not converged: some runs hit the generation cap or diverged\n";
        return kNotConverged;
    }
    return kSuccess;
}

struct GenerateOptions {
    std::string problem;
    std::size_t n = 200;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
    const ProblemSpec spec = resolve_problem(o.problem, o.n, o.seed);
    const LinearSystem sys = parse_or_usage([&] { return generate_problem(spec); });

    std::string s = "# hybridsr problem; the commented dump below is informational\n";
    s += format_problem_spec(spec);
    s += "# diag=" + format_rule(spec.diag) + "\n";
    s += "# offdiag=" + format_rule(spec.offdiag) + "\n";
    s += "# rhs=" + format_rule(spec.rhs) + "\n";
    for (std::size_t i = 0; i < sys.size(); ++i) {
        s += "# A[" + std::to_string(i + 1) + "]:";
        for (double v : sys.a().row(i)) s += ' ' + text::format_double(v);
        s += '\n';
    }
    s += "# b:";
    for (double v : sys.b()) s += ' ' + text::format_double(v);
    s += '\n';
    write_file(o.out, s);
    out << "wrote " << problem_id_name(spec.id) << " n=" << spec.n << " to " << o.out << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relaxed Jacobi/Gauss-Seidel solvers with self-adaptive relaxation factors", "hybridsr"};
    app.require_subcommand(1);

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "Solve one generated problem and print the result line");
    solve->add_option("--problem", so.problem, "Built-in family P1..P11 or a problem-spec file")->required();
    solve->add_option("--variant", so.variant,
                      "JBTVA, GSBTVA, MJBTVA, MGSBTVA, FIXED_JACOBI_SR or FIXED_GS_SR")
        ->capture_default_str();
    solve->add_option("--seed", so.seed, "Seed for problem generation and solver")->capture_default_str();
    solve->add_option("--n", so.n, "Order of built-in problems")->capture_default_str();
    solve->add_option("--threshold", so.threshold, "Residual threshold")->capture_default_str();
    solve->add_option("--max-gens", so.max_gens, "Generation cap")->capture_default_str();
    solve->add_option("--population", so.population, "Population size (even)")->capture_default_str();
    solve->add_option("--omega", so.omega, "Relaxation factor of the FIXED_* variants")->capture_default_str();
    solve->add_option("--trace", so.trace, "Write the residual trace as SVG");

    BenchOptions bo;
    auto* bench = app.add_subcommand("bench", "Run a benchmark plan and write a CSV");
    bench->add_option("--plan", bo.plan, "Plan file")->required();
    bench->add_option("--out", bo.out, "CSV output path")->required();
    bench->add_option("--traces", bo.traces, "Directory for per-instance SVG trace charts");
    bench->add_option("--threads", bo.threads, "Worker threads (overrides the plan)");

    GenerateOptions go;
    auto* generate = app.add_subcommand("generate", "Write a generated problem as a spec file with an entry dump");
    generate->add_option("--problem", go.problem, "Built-in family P1..P11 or a problem-spec file")->required();
    generate->add_option("--n", go.n, "Order")->capture_default_str();
    generate->add_option("--seed", go.seed, "Seed")->capture_default_str();
    generate->add_option("--out", go.out, "Output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        err << target->help();
        return kUsageError;
    }

    try {
        if (*solve) return cmd_solve(so, out, err);
        if (*bench) return cmd_bench(bo, out, err);
        return cmd_generate(go, out);
    } catch (const CliFailure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
}

}  // namespace hybridsr::cli
