#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hybridsr/bench.hpp"
#include "hybridsr/errors.hpp"

using namespace hybridsr;

namespace {

BenchPlan small_plan() {
    BenchPlan plan;
    plan.problems = {builtin_problem(ProblemId::p1, 30, 0)};
    plan.variants = {Variant::jbtva, Variant::mjbtva};
    plan.repetitions = 3;
    plan.base_seed = 5;
    return plan;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t c = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++c;
    return c;
}

// Rows that differ only in wall time.
void strip_timing(std::vector<BenchRow>& rows) {
    for (auto& r : rows) r.elapsed_ms = 0.0;
}

}  // namespace

TEST_CASE("run_benchmark produces one row per problem x variant x repetition") {
    const auto plan = small_plan();
    const auto result = run_benchmark(plan);
    REQUIRE(result.rows.size() == 6);
    REQUIRE(result.traces.size() == 6);
    for (std::size_t v = 0; v < 2; ++v) {
        for (std::size_t r = 0; r < 3; ++r) {
            const auto& row = result.rows[v * 3 + r];
            CHECK(row.problem_id == "P1");
            CHECK(row.variant == plan.variants[v]);
            CHECK(row.seed == run_seed(plan.base_seed, plan.problems[0], plan.variants[v], r));
            CHECK(row.converged);
            CHECK(result.traces[v * 3 + r].size() == row.generations + 1);
        }
    }
}

TEST_CASE("variants on the same repetition share the instance") {
    const auto result = run_benchmark(small_plan());
    for (std::size_t r = 0; r < 3; ++r) CHECK(result.rows[r].problem_hash == result.rows[3 + r].problem_hash);
    CHECK(result.rows[0].problem_hash != result.rows[1].problem_hash);

    const auto spec = small_plan().problems[0];
    auto instance = spec;
    instance.seed = instance_seed(5, spec, 0);
    CHECK(result.rows[0].problem_hash == problem_hash(generate_problem(instance)));
}

TEST_CASE("benchmarks are reproducible and order independent") {
    auto plan = small_plan();
    auto a = run_benchmark(plan).rows;
    auto b = run_benchmark(plan).rows;
    strip_timing(a);
    strip_timing(b);
    CHECK(a == b);

    std::reverse(plan.variants.begin(), plan.variants.end());
    plan.problems.insert(plan.problems.begin(), builtin_problem(ProblemId::p6, 20, 0));
    auto c = run_benchmark(plan).rows;
    strip_timing(c);
    REQUIRE(c.size() == 12);
    // P1 rows now sit at 6..11 with the variants swapped.
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(c[6 + r] == a[3 + r]);
        CHECK(c[9 + r] == a[r]);
    }
}

TEST_CASE("threaded benchmark matches the serial one") {
    auto plan = small_plan();
    auto serial = run_benchmark(plan).rows;
    plan.threads = 3;
    auto threaded = run_benchmark(plan).rows;
    strip_timing(serial);
    strip_timing(threaded);
    CHECK(serial == threaded);
}

TEST_CASE("run seeds are distinct across variants and repetitions") {
    const auto spec = builtin_problem(ProblemId::p1, 200, 0);
    std::map<std::uint64_t, int> seen;
    for (Variant v : kAllVariants)
        for (std::size_t r = 0; r < 50; ++r) ++seen[run_seed(0, spec, v, r)];
    for (std::size_t r = 0; r < 50; ++r) ++seen[instance_seed(0, spec, r)];
    CHECK(seen.size() == 7 * 50);
    CHECK(problem_key(spec) != problem_key(builtin_problem(ProblemId::p2, 200, 0)));
}

TEST_CASE("CSV examples") {
    std::ostringstream empty;
    write_csv({}, empty);
    CHECK(empty.str() == std::string(kCsvHeader) + "\n");
    CHECK(kCsvHeader == "problem,variant,seed,generations,elapsed_ms,final_residual,converged,problem_hash");

    const BenchRow row{"P1", Variant::mgsbtva, 42, 31, 1.25, 9.5e-8, true, 0x00ab'cdef'0123'4567ULL};
    std::ostringstream one;
    write_csv(std::vector{row}, one);
    CHECK(one.str() == std::string(kCsvHeader) + "\nP1,MGSBTVA,42,31,1.25,9.5e-08,true,00abcdef01234567\n");
    CHECK(count(one.str(), "\n") == 2);
}

TEST_CASE("CSV round-trips arbitrary rows") {
    Rng rng(8);
    std::vector<BenchRow> rows;
    for (int i = 0; i < 200; ++i) {
        BenchRow r;
        r.problem_id = i % 2 ? "custom" : "P" + std::to_string(1 + i % 11);
        r.variant = kAllVariants[i % 6];
        r.seed = rng.next_u64();
        r.generations = rng.next_u64() % 100000;
        r.elapsed_ms = rng.uniform(0, 1e4) * std::pow(10.0, rng.uniform(-10, 5));
        r.final_residual = i == 7 ? std::numeric_limits<double>::infinity() : rng.uniform(0, 1) * 1e-7;
        r.converged = i % 3 == 0;
        r.problem_hash = rng.next_u64();
        rows.push_back(r);
    }
    std::ostringstream out;
    write_csv(rows, out);
    CHECK(parse_csv(out.str()) == rows);
}

TEST_CASE("parse_csv rejects malformed input") {
    CHECK_THROWS_AS(parse_csv("problem,variant\n"), ParseError);
    const std::string h = std::string(kCsvHeader) + "\n";
    CHECK_THROWS_AS(parse_csv(h + "P1,JBTVA,1,2,3,4,true\n"), ParseError);
    CHECK_THROWS_AS(parse_csv(h + "P1,XBTVA,1,2,3,4,true,00\n"), ParseError);
    CHECK_THROWS_AS(parse_csv(h + "P1,JBTVA,1,2,3,4,yes,00\n"), ParseError);
    CHECK(parse_csv(h).empty());
}

TEST_CASE("summarize averages per problem and variant") {
    std::vector<BenchRow> rows{
        {"P1", Variant::jbtva, 1, 10, 2.0, 1e-8, true, 1},
        {"P1", Variant::jbtva, 2, 30, 4.0, 1e-8, true, 2},
        {"P1", Variant::mjbtva, 1, 20, 1.0, 1e-8, false, 1},
    };
    const auto s = summarize(rows);
    REQUIRE(s.size() == 2);
    CHECK(s[0].variant == Variant::jbtva);
    CHECK(s[0].runs == 2);
    CHECK(s[0].converged_runs == 2);
    CHECK(s[0].mean_generations == 20.0);
    CHECK(s[0].mean_elapsed_ms == 3.0);
    CHECK(s[0].mean_ms_per_generation == doctest::Approx((0.2 + 4.0 / 30.0) / 2));
    CHECK(s[1].converged_runs == 0);
}

TEST_CASE("trace SVG structure") {
    const std::vector<TracePoint> pts{{0, 100.0}, {1, 1.0}, {2, 1e-3}, {3, 0.0}};
    std::ostringstream one;
    emit_trace_svg(std::vector<LabeledTrace>{{"", pts}}, one);
    const auto svg = one.str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(count(svg, "<polyline") == 1);
    CHECK(count(svg, "</svg>") == 1);
    CHECK(svg.find("nan") == std::string::npos);

    std::ostringstream two;
    emit_trace_svg(std::vector<LabeledTrace>{{"JBTVA", pts}, {"A<&>B", pts}}, two);
    CHECK(count(two.str(), "<polyline") == 2);
    CHECK(two.str().find("A&lt;&amp;&gt;B") != std::string::npos);
    CHECK(two.str().find("JBTVA") != std::string::npos);

    std::ostringstream none;
    CHECK_THROWS_AS(emit_trace_svg({}, none), InvalidArgument);
}

TEST_CASE("bench plan parsing") {
    const auto plan = parse_bench_plan(
        "# paired comparison\n"
        "id=P1,P6\n"
        "n=50\n"
        "variants=JBTVA, MJBTVA\n"
        "repetitions=4\n"
        "base_seed=9\n"
        "threshold=1e-6\n"
        "max_generations=500\n");
    REQUIRE(plan.problems.size() == 2);
    CHECK(plan.problems[1] == builtin_problem(ProblemId::p6, 50, 0));
    CHECK(plan.variants == std::vector<Variant>{Variant::jbtva, Variant::mjbtva});
    CHECK(plan.repetitions == 4);
    CHECK(plan.base_seed == 9);
    CHECK(plan.solver_defaults.threshold == 1e-6);
    CHECK(plan.solver_defaults.max_generations == 500);

    const auto custom = parse_bench_plan("id=custom\nn=8\ndiag=const:50\noffdiag=uniform:-1,1\nrhs=const:2\nvariants=GSBTVA");
    CHECK(custom.problems[0].id == ProblemId::custom);
    CHECK(custom.repetitions == 10);

    CHECK_THROWS_AS(parse_bench_plan("id=P1"), ParseError);
    CHECK_THROWS_AS(parse_bench_plan("variants=JBTVA"), ParseError);
    CHECK_THROWS_AS(parse_bench_plan("id=P1\nvariants=JBTVA\nrepetitions=0"), ParseError);
    CHECK_THROWS_AS(parse_bench_plan("id=P1\nvariants=FOO"), ParseError);
    CHECK_THROWS_AS(parse_bench_plan("id=P1\nvariants=JBTVA\ndiag=const:3"), ParseError);
}
