#pragma once
// Small text helpers shared by the line-oriented file formats.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hybridsr::text {

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Whole-string parses; nullopt on any leftover or malformed character.
std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::uint64_t> parse_u64(std::string_view s) noexcept;

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line;  // 1-based
};

/// Parses `key=value` lines. Blank lines and lines starting with '#' are
/// skipped; whitespace around keys and values is ignored. Throws ParseError on
/// a line without '=', an empty key, or a repeated key.
std::vector<KeyValue> parse_key_values(std::string_view input);

}  // namespace hybridsr::text
