#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the readers and writers.
namespace smellcast::text {

std::string_view trim(std::string_view s);

// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char delim);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace smellcast::text
