#pragma once
// Seeded generators for the benchmark problem families P1..P11 and the
// key=value problem-spec format.
//
// Spec file example (P6 written as a custom problem):
//
//     # strongly diagonally dominant, constant rhs
//     id=custom
//     n=10
//     diag=const:50
//     offdiag=uniform:-1,1
//     rhs=const:2
//     seed=1
//
// Formula indices are 1-based.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "hybridsr/linalg.hpp"
#include "hybridsr/rng.hpp"

namespace hybridsr {

enum class ProblemId { p1, p2, p3, p4, p5, p6, p7, p8, p9, p10, p11, custom };

std::string_view problem_id_name(ProblemId id) noexcept;  // "P1".."P11", "custom"
std::optional<ProblemId> parse_problem_id(std::string_view s) noexcept;

struct ConstantRule {
    double value;
    bool operator==(const ConstantRule&) const = default;
};

/// Uniform on the open interval (lo, hi).
struct UniformRule {
    double lo;
    double hi;
    bool operator==(const UniformRule&) const = default;
};

enum class Formula {
    p7_diag,     // a_ii = 20 i
    p7_offdiag,  // a_ij = (100 - j) / 20
    p7_rhs,      // b_i = 10 i
    p8_diag,     // a_ii = 20 n
    p8_offdiag,  // a_ij = j
    p8_rhs,      // b_i = i
};

struct FormulaRule {
    Formula formula;
    bool operator==(const FormulaRule&) const = default;
};

using EntryRule = std::variant<ConstantRule, UniformRule, FormulaRule>;

struct ProblemSpec {
    ProblemId id = ProblemId::p1;
    std::size_t n = 200;
    EntryRule diag = UniformRule{100, 200};
    EntryRule offdiag = UniformRule{-10, 10};
    EntryRule rhs = UniformRule{100, 200};
    std::uint64_t seed = 0;

    bool operator==(const ProblemSpec&) const = default;
};

/// Rules of a built-in family at order n.
ProblemSpec builtin_problem(ProblemId id, std::size_t n, std::uint64_t seed);

/// Fills A row by row, then b, drawing from `rng` for uniform rules. A uniform
/// diagonal rule whose interval contains 0 is redrawn until |a_ii| >= 1.
LinearSystem generate_problem(const ProblemSpec& spec, Rng& rng);

/// Same, with the generator seeded from spec.seed.
LinearSystem generate_problem(const ProblemSpec& spec);

enum class RuleRole { diag, offdiag, rhs };

/// Parses one rule value such as "uniform:-1,1". `formula:p7` / `formula:p8`
/// resolve to the formula for `role`. Throws ParseError tagged with `line`.
EntryRule parse_rule(std::string_view value, RuleRole role, std::size_t line);

/// Throws ParseError (with 1-based line) on malformed values, unknown keys or ids,
/// or missing required keys. Rule keys are only accepted with id=custom.
ProblemSpec parse_problem_spec(std::string_view text);

std::string format_rule(const EntryRule& rule);

/// Canonical key=value form; parse_problem_spec(format_problem_spec(s)) == s.
std::string format_problem_spec(const ProblemSpec& spec);

/// Throws InvalidArgument if a rule cannot produce a valid system (empty
/// interval, zero constant diagonal, diagonal interval inside (-1, 1) that spans 0).
void validate(const ProblemSpec& spec);

}  // namespace hybridsr
