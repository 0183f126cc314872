#include <doctest.h>

#include <cmath>

#include "hybridsr/errors.hpp"
#include "hybridsr/problems.hpp"

using namespace hybridsr;

namespace {

constexpr ProblemId kBuiltins[] = {ProblemId::p1, ProblemId::p2, ProblemId::p3, ProblemId::p4,
                                   ProblemId::p5, ProblemId::p6, ProblemId::p7, ProblemId::p8,
                                   ProblemId::p9, ProblemId::p10, ProblemId::p11};

std::size_t parse_error_line(std::string_view text) {
    try {
        parse_problem_spec(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    FAIL("expected a parse error for: " << text);
    return 0;
}

}  // namespace

TEST_CASE("P6 at n=5") {
    const auto sys = generate_problem(builtin_problem(ProblemId::p6, 5, 3));
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(sys.a()(i, i) == 50.0);
        CHECK(sys.b()[i] == 2.0);
        for (std::size_t j = 0; j < 5; ++j) {
            if (i == j) continue;
            CHECK(sys.a()(i, j) > -1.0);
            CHECK(sys.a()(i, j) < 1.0);
        }
    }
}

TEST_CASE("P8 at n=5") {
    const auto sys = generate_problem(builtin_problem(ProblemId::p8, 5, 3));
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(sys.a()(i, i) == 100.0);
        CHECK(sys.b()[i] == static_cast<double>(i + 1));
        for (std::size_t j = 0; j < 5; ++j) {
            if (i != j) CHECK(sys.a()(i, j) == static_cast<double>(j + 1));
        }
    }
}

TEST_CASE("P7 formulas") {
    const auto sys = generate_problem(builtin_problem(ProblemId::p7, 6, 0));
    CHECK(sys.a()(0, 0) == 20.0);
    CHECK(sys.a()(5, 5) == 120.0);
    CHECK(sys.a()(0, 3) == doctest::Approx(96.0 / 20.0));
    CHECK(sys.a()(4, 3) == doctest::Approx(96.0 / 20.0));
    CHECK(sys.b()[2] == 30.0);
}

TEST_CASE("generation is deterministic and valid for every family") {
    for (ProblemId id : kBuiltins) {
        const auto spec = builtin_problem(id, 40, 11);
        const auto a = generate_problem(spec);
        const auto b = generate_problem(spec);
        CHECK(a.a() == b.a());
        CHECK(a.b() == b.b());
        for (std::size_t i = 0; i < 40; ++i) {
            CHECK(std::isfinite(a.b()[i]));
            CHECK(std::abs(a.a()(i, i)) >= kMinDiagonal);
        }
        if (id != ProblemId::p7 && id != ProblemId::p8) {
            auto other = spec;
            other.seed = 12;
            CHECK_FALSE(generate_problem(other).a() == a.a());
        }
    }
}

TEST_CASE("formula families ignore the seed") {
    for (ProblemId id : {ProblemId::p7, ProblemId::p8}) {
        const auto a = generate_problem(builtin_problem(id, 30, 1));
        const auto b = generate_problem(builtin_problem(id, 30, 999));
        CHECK(a.a() == b.a());
        CHECK(a.b() == b.b());
    }
}

TEST_CASE("uniform rules stay inside their open interval") {
    ProblemSpec spec;
    spec.id = ProblemId::custom;
    spec.n = 100;  // 100 diagonal, 9900 off-diagonal and 100 rhs draws per system
    spec.diag = UniformRule{100, 200};
    spec.offdiag = UniformRule{-1e-3, 1e-3};
    spec.rhs = UniformRule{0, 100};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        spec.seed = seed;
        const auto sys = generate_problem(spec);
        for (std::size_t i = 0; i < 100; ++i) {
            for (std::size_t j = 0; j < 100; ++j) {
                const double v = sys.a()(i, j);
                if (i == j) {
                    REQUIRE(v > 100.0);
                    REQUIRE(v < 200.0);
                } else {
                    REQUIRE(v > -1e-3);
                    REQUIRE(v < 1e-3);
                }
            }
            REQUIRE(sys.b()[i] > 0.0);
            REQUIRE(sys.b()[i] < 100.0);
        }
    }
}

TEST_CASE("diagonals spanning zero are resampled away from it") {
    for (ProblemId id : {ProblemId::p3, ProblemId::p9, ProblemId::p11}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto sys = generate_problem(builtin_problem(id, 200, seed));
            for (std::size_t i = 0; i < 200; ++i) REQUIRE(std::abs(sys.a()(i, i)) >= 1.0);
        }
    }
    // P3 and P11 share their rules.
    const auto p3 = builtin_problem(ProblemId::p3, 10, 1);
    const auto p11 = builtin_problem(ProblemId::p11, 10, 1);
    CHECK(p3.diag == p11.diag);
    CHECK(p3.offdiag == p11.offdiag);
    CHECK(p3.rhs == p11.rhs);
}

TEST_CASE("P4 right-hand side is nonnegative") {
    const auto sys = generate_problem(builtin_problem(ProblemId::p4, 200, 2));
    for (double v : sys.b()) {
        CHECK(v > 0.0);
        CHECK(v < 100.0);
    }
}

TEST_CASE("parse_problem_spec examples") {
    const auto p1 = parse_problem_spec("id=P1\nn=200\nseed=42");
    CHECK(p1 == builtin_problem(ProblemId::p1, 200, 42));

    const auto custom = parse_problem_spec("id=custom\nn=10\ndiag=const:50\noffdiag=uniform:-1,1\nrhs=const:2\nseed=1");
    CHECK(custom.id == ProblemId::custom);
    CHECK(custom.n == 10);
    CHECK(custom.seed == 1);
    const auto p6 = builtin_problem(ProblemId::p6, 10, 1);
    CHECK(custom.diag == p6.diag);
    CHECK(custom.offdiag == p6.offdiag);
    CHECK(custom.rhs == p6.rhs);

    CHECK(parse_error_line("n=abc") == 1);
}

TEST_CASE("parse_problem_spec errors carry line numbers") {
    CHECK(parse_error_line("id=P1\nn=200\ncolour=red") == 3);
    CHECK(parse_error_line("id=P12\nn=5") == 1);
    CHECK(parse_error_line("# c\n\nid=custom\nn=4\ndiag=uniform:5\noffdiag=const:0\nrhs=const:1") == 5);
    CHECK(parse_error_line("id=custom\nn=4\ndiag=uniform:5,1\noffdiag=const:0\nrhs=const:1") == 3);
    CHECK(parse_error_line("id=custom\nn=4\ndiag=const:1\noffdiag=const:0") == 0);
    CHECK(parse_error_line("n=4") == 0);
    CHECK(parse_error_line("id=P1\nn=0") == 2);
    CHECK(parse_error_line("id=P1\nid=P2\nn=3") == 2);
    CHECK(parse_error_line("id=P1\nn=3\ndiag=const:4") == 3);
    CHECK(parse_error_line("id=P1\nn 3") == 2);
    CHECK(parse_error_line("id=custom\nn=3\ndiag=const:0\noffdiag=const:0\nrhs=const:1") > 0);
}

TEST_CASE("format_problem_spec round-trips") {
    for (ProblemId id : kBuiltins) {
        const auto spec = builtin_problem(id, 17, 123456789);
        CHECK(parse_problem_spec(format_problem_spec(spec)) == spec);
    }
    ProblemSpec custom;
    custom.id = ProblemId::custom;
    custom.n = 9;
    custom.diag = UniformRule{0.1, 1e300};
    custom.offdiag = FormulaRule{Formula::p8_offdiag};
    custom.rhs = ConstantRule{-1.0 / 3.0};
    custom.seed = ~0ULL;
    CHECK(parse_problem_spec(format_problem_spec(custom)) == custom);
}

TEST_CASE("problem id names") {
    for (ProblemId id : kBuiltins) CHECK(parse_problem_id(problem_id_name(id)) == id);
    CHECK(parse_problem_id("custom") == ProblemId::custom);
    CHECK_FALSE(parse_problem_id("p1").has_value());
    CHECK_FALSE(parse_problem_id("P0").has_value());
}
