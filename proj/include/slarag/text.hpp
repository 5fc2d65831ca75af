#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace slarag::text {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t value);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Lowercased alphanumeric runs; every other byte is a separator.
std::vector<std::string> word_tokens(std::string_view s);

// Whitespace-delimited pieces, runs of whitespace collapse.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Shortest round-trippable decimal ("%.17g" trimmed), locale independent.
std::string format_double(double v);
// Fixed decimals, used by CSV reports.
std::string format_fixed(double v, int decimals);

} // namespace slarag::text
