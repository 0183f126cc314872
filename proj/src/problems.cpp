#include "hybridsr/problems.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hybridsr/errors.hpp"
#include "hybridsr/text.hpp"

namespace hybridsr {

namespace {

constexpr std::array<std::string_view, 12> kIdNames = {"P1", "P2", "P3", "P4",  "P5",  "P6",
                                                       "P7", "P8", "P9", "P10", "P11", "custom"};

struct FormulaName {
    Formula formula;
    std::string_view name;
};

constexpr std::array<FormulaName, 6> kFormulaNames = {{
    {Formula::p7_diag, "p7-diag"},
    {Formula::p7_offdiag, "p7-offdiag"},
    {Formula::p7_rhs, "p7-rhs"},
    {Formula::p8_diag, "p8-diag"},
    {Formula::p8_offdiag, "p8-offdiag"},
    {Formula::p8_rhs, "p8-rhs"},
}};

// i, j are 1-based.
double eval_formula(Formula f, std::size_t i, std::size_t j, std::size_t n) noexcept {
    const auto di = static_cast<double>(i);
    const auto dj = static_cast<double>(j);
    switch (f) {
        case Formula::p7_diag: return 20.0 * di;
        case Formula::p7_offdiag: return (100.0 - dj) / 20.0;
        case Formula::p7_rhs: return 10.0 * di;
        case Formula::p8_diag: return 20.0 * static_cast<double>(n);
        case Formula::p8_offdiag: return dj;
        case Formula::p8_rhs: return di;
    }
    return 0.0;
}

bool spans_zero(const UniformRule& u) noexcept { return u.lo < 0.0 && u.hi > 0.0; }

double sample(const EntryRule& rule, std::size_t i, std::size_t j, std::size_t n, Rng& rng, bool diagonal) {
    if (const auto* c = std::get_if<ConstantRule>(&rule)) return c->value;
    if (const auto* f = std::get_if<FormulaRule>(&rule)) return eval_formula(f->formula, i, j, n);
    const auto& u = std::get<UniformRule>(rule);
    if (diagonal && spans_zero(u)) {
        for (;;) {
            const double v = rng.uniform(u.lo, u.hi);
            if (std::abs(v) >= 1.0) return v;
        }
    }
    return rng.uniform(u.lo, u.hi);
}

void validate_rule(const EntryRule& rule, std::string_view what, bool diagonal) {
    const std::string name(what);
    if (const auto* c = std::get_if<ConstantRule>(&rule)) {
        if (!std::isfinite(c->value)) throw InvalidArgument(name + " constant must be finite");
        if (diagonal && std::abs(c->value) < kMinDiagonal) throw InvalidArgument("diagonal constant must be nonzero");
    } else if (const auto* u = std::get_if<UniformRule>(&rule)) {
        if (!std::isfinite(u->lo) || !std::isfinite(u->hi) || !(u->lo < u->hi)) {
            throw InvalidArgument(name + " interval must satisfy lo < hi");
        }
        if (diagonal && spans_zero(*u) && u->lo > -1.0 && u->hi < 1.0) {
            throw InvalidArgument("diagonal interval spanning 0 must reach beyond |a_ii| = 1");
        }
        if (diagonal && !spans_zero(*u) && std::max(std::abs(u->lo), std::abs(u->hi)) < kMinDiagonal) {
            throw InvalidArgument("diagonal interval is too close to zero");
        }
    }
}

}  // namespace

std::string_view problem_id_name(ProblemId id) noexcept { return kIdNames[static_cast<std::size_t>(id)]; }

std::optional<ProblemId> parse_problem_id(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kIdNames.size(); ++i) {
        if (kIdNames[i] == s) return static_cast<ProblemId>(i);
    }
    return std::nullopt;
}

EntryRule parse_rule(std::string_view value, RuleRole role, std::size_t line) {
    const auto colon = value.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError(line, "rule must look like const:<v>, uniform:<lo>,<hi> or formula:<name>");
    }
    const auto kind = text::trim(value.substr(0, colon));
    const auto arg = text::trim(value.substr(colon + 1));
    if (kind == "const") {
        const auto v = text::parse_double(arg);
        if (!v) throw ParseError(line, "malformed constant '" + std::string(arg) + "'");
        return ConstantRule{*v};
    }
    if (kind == "uniform") {
        const auto parts = text::split(arg, ',');
        if (parts.size() != 2) throw ParseError(line, "uniform interval needs exactly two bounds");
        const auto lo = text::parse_double(parts[0]);
        const auto hi = text::parse_double(parts[1]);
        if (!lo || !hi) throw ParseError(line, "malformed interval '" + std::string(arg) + "'");
        if (!(*lo < *hi)) throw ParseError(line, "interval must satisfy lo < hi");
        return UniformRule{*lo, *hi};
    }
    if (kind == "formula") {
        if (arg == "p7" || arg == "p8") {
            const bool p7 = arg == "p7";
            switch (role) {
                case RuleRole::diag: return FormulaRule{p7 ? Formula::p7_diag : Formula::p8_diag};
                case RuleRole::offdiag: return FormulaRule{p7 ? Formula::p7_offdiag : Formula::p8_offdiag};
                case RuleRole::rhs: return FormulaRule{p7 ? Formula::p7_rhs : Formula::p8_rhs};
            }
        }
        for (const auto& f : kFormulaNames) {
            if (f.name == arg) return FormulaRule{f.formula};
        }
        throw ParseError(line, "unknown formula '" + std::string(arg) + "'");
    }
    throw ParseError(line, "unknown rule kind '" + std::string(kind) + "'");
}

ProblemSpec builtin_problem(ProblemId id, std::size_t n, std::uint64_t seed) {
    ProblemSpec s;
    s.id = id;
    s.n = n;
    s.seed = seed;
    switch (id) {
        case ProblemId::p1:
            s.diag = UniformRule{100, 200};
            s.offdiag = UniformRule{-10, 10};
            s.rhs = UniformRule{100, 200};
            break;
        case ProblemId::p2:
            s.diag = UniformRule{1, 400};
            s.offdiag = UniformRule{-4, 4};
            s.rhs = ConstantRule{100};
            break;
        case ProblemId::p3:
        case ProblemId::p11:
            s.diag = UniformRule{-50, 50};
            s.offdiag = UniformRule{-1, 1};
            s.rhs = UniformRule{-1, 1};
            break;
        case ProblemId::p4:
            s.diag = ConstantRule{100};
            s.offdiag = UniformRule{-1, 1};
            s.rhs = UniformRule{0, 100};  // printed as "(-00, 100)"
            break;
        case ProblemId::p5:
            s.diag = ConstantRule{50};
            s.offdiag = UniformRule{-10, 10};
            s.rhs = UniformRule{-5, 5};
            break;
        case ProblemId::p6:
            s.diag = ConstantRule{50};
            s.offdiag = UniformRule{-1, 1};
            s.rhs = ConstantRule{2};
            break;
        case ProblemId::p7:
            s.diag = FormulaRule{Formula::p7_diag};
            s.offdiag = FormulaRule{Formula::p7_offdiag};
            s.rhs = FormulaRule{Formula::p7_rhs};
            break;
        case ProblemId::p8:
            s.diag = FormulaRule{Formula::p8_diag};
            s.offdiag = FormulaRule{Formula::p8_offdiag};
            s.rhs = FormulaRule{Formula::p8_rhs};
            break;
        case ProblemId::p9:
            s.diag = UniformRule{-20, 200};
            s.offdiag = UniformRule{-2, 3};
            s.rhs = UniformRule{-2, 3};
            break;
        case ProblemId::p10:
            s.diag = ConstantRule{40};
            s.offdiag = UniformRule{-4, 4};
            s.rhs = ConstantRule{200};
            break;
        case ProblemId::custom:
            throw InvalidArgument("custom problems have no built-in rules");
    }
    return s;
}

void validate(const ProblemSpec& spec) {
    if (spec.n == 0) throw InvalidArgument("problem order n must be positive");
    validate_rule(spec.diag, "diag", true);
    validate_rule(spec.offdiag, "offdiag", false);
    validate_rule(spec.rhs, "rhs", false);
}

LinearSystem generate_problem(const ProblemSpec& spec, Rng& rng) {
    validate(spec);
    const std::size_t n = spec.n;
    DenseMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = i == j ? sample(spec.diag, i + 1, j + 1, n, rng, true)
                             : sample(spec.offdiag, i + 1, j + 1, n, rng, false);
        }
    }
    Vector b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = sample(spec.rhs, i + 1, 1, n, rng, false);
    return {std::move(a), std::move(b)};
}

LinearSystem generate_problem(const ProblemSpec& spec) {
    Rng rng(spec.seed, Stream::problem);
    return generate_problem(spec, rng);
}

ProblemSpec parse_problem_spec(std::string_view input) {
    const auto entries = text::parse_key_values(input);

    std::optional<ProblemId> id;
    std::optional<std::size_t> n;
    std::uint64_t seed = 0;
    std::optional<EntryRule> diag, offdiag, rhs;
    std::size_t first_rule_line = 0;

    for (const auto& kv : entries) {
        if (kv.key == "id") {
            id = parse_problem_id(kv.value);
            if (!id) throw ParseError(kv.line, "unknown problem id '" + kv.value + "'");
        } else if (kv.key == "n") {
            const auto v = text::parse_u64(kv.value);
            if (!v || *v == 0) throw ParseError(kv.line, "n must be a positive integer, got '" + kv.value + "'");
            n = static_cast<std::size_t>(*v);
        } else if (kv.key == "seed") {
            const auto v = text::parse_u64(kv.value);
            if (!v) throw ParseError(kv.line, "seed must be an unsigned 64-bit integer, got '" + kv.value + "'");
            seed = *v;
        } else if (kv.key == "diag" || kv.key == "offdiag" || kv.key == "rhs") {
            const RuleRole role = kv.key == "diag" ? RuleRole::diag : kv.key == "offdiag" ? RuleRole::offdiag : RuleRole::rhs;
            auto rule = parse_rule(kv.value, role, kv.line);
            try {
                validate_rule(rule, kv.key, role == RuleRole::diag);
            } catch (const InvalidArgument& e) {
                throw ParseError(kv.line, e.what());
            }
            (role == RuleRole::diag ? diag : role == RuleRole::offdiag ? offdiag : rhs) = rule;
            if (first_rule_line == 0) first_rule_line = kv.line;
        } else {
            throw ParseError(kv.line, "unknown key '" + kv.key + "'");
        }
    }

    if (!id) throw ParseError(0, "missing required key 'id'");
    if (!n) throw ParseError(0, "missing required key 'n'");

    if (*id != ProblemId::custom) {
        if (first_rule_line != 0) {
            throw ParseError(first_rule_line, "rule keys are only allowed with id=custom");
        }
        return builtin_problem(*id, *n, seed);
    }
    if (!diag) throw ParseError(0, "missing required key 'diag'");
    if (!offdiag) throw ParseError(0, "missing required key 'offdiag'");
    if (!rhs) throw ParseError(0, "missing required key 'rhs'");
    return {ProblemId::custom, *n, *diag, *offdiag, *rhs, seed};
}

std::string format_rule(const EntryRule& rule) {
    if (const auto* c = std::get_if<ConstantRule>(&rule)) return "const:" + text::format_double(c->value);
    if (const auto* u = std::get_if<UniformRule>(&rule)) {
        return "uniform:" + text::format_double(u->lo) + "," + text::format_double(u->hi);
    }
    const auto f = std::get<FormulaRule>(rule).formula;
    for (const auto& fn : kFormulaNames) {
        if (fn.formula == f) return "formula:" + std::string(fn.name);
    }
    return "formula:?";
}

std::string format_problem_spec(const ProblemSpec& spec) {
    std::string out;
    out += "id=" + std::string(problem_id_name(spec.id)) + "\n";
    out += "n=" + std::to_string(spec.n) + "\n";
    out += "seed=" + std::to_string(spec.seed) + "\n";
    if (spec.id == ProblemId::custom) {
        out += "diag=" + format_rule(spec.diag) + "\n";
        out += "offdiag=" + format_rule(spec.offdiag) + "\n";
        out += "rhs=" + format_rule(spec.rhs) + "\n";
    }
    return out;
}

}  // namespace hybridsr
