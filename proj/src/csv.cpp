#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hybridsr/bench.hpp"
#include "hybridsr/errors.hpp"
#include "hybridsr/text.hpp"

namespace hybridsr {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::optional<std::uint64_t> parse_hex64(std::string_view s) {
    if (s.empty() || s.size() > 16) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else return std::nullopt;
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return v;
}

}  // namespace

void write_csv(std::span<const BenchRow> rows, std::ostream& out) {
    std::string buf(kCsvHeader);
    buf += '\n';
    for (const auto& r : rows) {
        buf += r.problem_id;
        buf += ',';
        buf += variant_name(r.variant);
        buf += ',';
        buf += std::to_string(r.seed);
        buf += ',';
        buf += std::to_string(r.generations);
        buf += ',';
        buf += text::format_double(r.elapsed_ms);
        buf += ',';
        buf += text::format_double(r.final_residual);
        buf += ',';
        buf += r.converged ? "true" : "false";
        buf += ',';
        buf += hex64(r.problem_hash);
        buf += '\n';
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed to write CSV output");
}

std::vector<BenchRow> parse_csv(std::string_view input) {
    std::vector<BenchRow> rows;
    std::size_t line_no = 0;
    bool header_seen = false;
    for (std::string_view line : text::split(input, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!header_seen) {
            if (line != kCsvHeader) throw ParseError(line_no, "unexpected CSV header");
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        const auto f = text::split(line, ',');
        if (f.size() != 8) throw ParseError(line_no, "expected 8 fields, got " + std::to_string(f.size()));

        BenchRow r;
        r.problem_id = std::string(f[0]);
        const auto variant = parse_variant(f[1]);
        const auto seed = text::parse_u64(f[2]);
        const auto gens = text::parse_u64(f[3]);
        const auto ms = text::parse_double(f[4]);
        const auto res = text::parse_double(f[5]);
        const auto hash = parse_hex64(f[7]);
        if (!variant) throw ParseError(line_no, "unknown variant '" + std::string(f[1]) + "'");
        if (!seed || !gens || !ms || !res || !hash) throw ParseError(line_no, "malformed numeric field");
        if (f[6] != "true" && f[6] != "false") throw ParseError(line_no, "converged must be true or false");
        r.variant = *variant;
        r.seed = *seed;
        r.generations = *gens;
        r.elapsed_ms = *ms;
        r.final_residual = *res;
        r.converged = f[6] == "true";
        r.problem_hash = *hash;
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw ParseError(0, "empty CSV input");
    return rows;
}

}  // namespace hybridsr
